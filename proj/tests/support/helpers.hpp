#pragma once

// Shared test plumbing: temp directories, file helpers, spawning the CLI.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        for (int attempt = 0; attempt < 16; ++attempt) {
            std::ostringstream name;
            name << "tailguard-test-" << std::hex << rd() << rd();
            const auto candidate = std::filesystem::temp_directory_path() / name.str();
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp directory");
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs the tailguard binary with the given (pre-quoted-safe) arguments.
/// Arguments must not contain single quotes. Only available to targets that
/// define TAILGUARD_CLI_PATH.
#ifdef TAILGUARD_CLI_PATH
inline CliResult run_cli(const std::vector<std::string>& args,
                         const std::string& extra_env = {}) {
    const TempDir scratch;
    const std::string out_path = scratch.file("stdout");
    const std::string err_path = scratch.file("stderr");

    std::ostringstream cmd;
    if (!extra_env.empty()) cmd << "env " << extra_env << " ";
    cmd << "'" << TAILGUARD_CLI_PATH << "'";
    for (const auto& arg : args) cmd << " '" << arg << "'";
    cmd << " > '" << out_path << "' 2> '" << err_path << "'";

    const int status = std::system(cmd.str().c_str());
    CliResult result;
    if (status == -1) {
        result.exit_code = -1;
    } else {
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}
#endif  // TAILGUARD_CLI_PATH

}  // namespace testsupport
