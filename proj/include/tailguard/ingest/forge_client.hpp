#pragma once

// REST client for pulling PR data off a GitHub-style forge. Listing and
// per-PR file endpoints are paginated; per-PR file fetches run on a small
// bounded worker pool. Retries cover transient transport failures and rate
// limiting with exponential backoff; auth and not-found errors surface
// immediately. Point base_url at a local server for tests.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/ingest/corpus_io.hpp"

namespace tailguard {

struct BackoffPolicy {
    std::chrono::milliseconds initial{250};
    double multiplier = 2.0;
};

struct FetchPolicy {
    std::size_t max_in_flight = 4;
    std::size_t retry_budget = 3;  // retries after the first attempt
    BackoffPolicy backoff;
    std::optional<std::string> since;  // ISO-8601 cutoff on created_at
    std::size_t page_size = 100;
};

enum class FetchErrorKind { AuthFailure, RepoNotFound, RateLimited, Transport };

class FetchError : public std::runtime_error {
public:
    FetchError(FetchErrorKind kind, const std::string& what,
               std::optional<std::string> rate_reset = std::nullopt)
        : std::runtime_error(what), kind(kind), rate_reset(std::move(rate_reset)) {}

    FetchErrorKind kind;
    std::optional<std::string> rate_reset;  // X-RateLimit-Reset, verbatim
};

struct FetchProgress {
    std::string repo;
    std::size_t page = 0;
    std::size_t pulls_seen = 0;
};

using ProgressFn = std::function<void(const FetchProgress&)>;

class ForgeClient {
public:
    explicit ForgeClient(std::string base_url = "https://api.github.com",
                         std::string token = {})
        : base_url_(std::move(base_url)), token_(std::move(token)) {}

    /// All PRs of `repo` (owner/name), any state, newest first, with
    /// per-file patches attached.
    std::vector<PullRequest> fetch_repo_pull_requests(const std::string& repo,
                                                      const FetchPolicy& policy = {},
                                                      const ProgressFn& progress = {}) const {
        std::vector<PullRequest> pulls;
        bool cutoff_reached = false;
        for (std::size_t page = 1; !cutoff_reached; ++page) {
            const std::string path = "/repos/" + repo +
                                     "/pulls?state=all&sort=created&direction=desc&per_page=" +
                                     std::to_string(policy.page_size) +
                                     "&page=" + std::to_string(page);
            const nlohmann::json listing = get_json(path, policy);
            if (!listing.is_array())
                throw FetchError(FetchErrorKind::Transport,
                                 "unexpected listing payload for " + repo);
            for (const auto& entry : listing) {
                PullRequest pr = parse_listing_entry(repo, entry);
                if (policy.since.has_value() && pr.created_at.has_value() &&
                    *pr.created_at < *policy.since) {
                    cutoff_reached = true;  // newest-first ordering: all later entries are older
                    break;
                }
                pulls.push_back(std::move(pr));
            }
            if (progress) progress({repo, page, pulls.size()});
            if (listing.size() < policy.page_size) break;
        }
        attach_files(repo, pulls, policy);
        return pulls;
    }

    const std::string& base_url() const { return base_url_; }

private:
    static PullRequest parse_listing_entry(const std::string& repo, const nlohmann::json& entry) {
        if (!entry.is_object() || !entry.contains("number"))
            throw FetchError(FetchErrorKind::Transport, "malformed PR entry for " + repo);
        PullRequest pr;
        pr.repo = repo;
        pr.id = repo + "#" + std::to_string(entry["number"].get<std::uint64_t>());
        if (entry.contains("title") && entry["title"].is_string())
            pr.title = entry["title"].get<std::string>();
        if (entry.contains("body") && entry["body"].is_string())
            pr.body = entry["body"].get<std::string>();
        const bool merged = entry.contains("merged_at") && entry["merged_at"].is_string();
        const std::string state =
            entry.contains("state") && entry["state"].is_string() ? entry["state"].get<std::string>()
                                                                  : "open";
        if (merged) {
            pr.outcome = Outcome::Merged;
        } else if (state == "closed") {
            pr.outcome = Outcome::Closed;
        } else {
            pr.outcome = Outcome::Opened;
        }
        if (entry.contains("created_at") && entry["created_at"].is_string())
            pr.created_at = entry["created_at"].get<std::string>();
        return pr;
    }

    void attach_files(const std::string& repo, std::vector<PullRequest>& pulls,
                      const FetchPolicy& policy) const {
        if (pulls.empty()) return;
        const std::size_t workers =
            std::min(std::max<std::size_t>(policy.max_in_flight, 1), pulls.size());

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::mutex error_mutex;
        std::exception_ptr first_error;

        const auto work = [&]() {
            while (!failed.load()) {
                const std::size_t i = next.fetch_add(1);
                if (i >= pulls.size()) return;
                try {
                    fetch_pr_files(repo, pulls[i], policy);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        };

        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }
        if (first_error) std::rethrow_exception(first_error);
    }

    void fetch_pr_files(const std::string& repo, PullRequest& pr,
                        const FetchPolicy& policy) const {
        const std::string number = pr.id.substr(pr.id.find('#') + 1);
        for (std::size_t page = 1;; ++page) {
            const std::string path = "/repos/" + repo + "/pulls/" + number +
                                     "/files?per_page=" + std::to_string(policy.page_size) +
                                     "&page=" + std::to_string(page);
            const nlohmann::json listing = get_json(path, policy);
            if (!listing.is_array())
                throw FetchError(FetchErrorKind::Transport,
                                 "unexpected files payload for " + pr.id);
            for (const auto& entry : listing) {
                if (!entry.is_object() || !entry.contains("filename")) continue;
                std::string patch;  // binary files come without one
                if (entry.contains("patch") && entry["patch"].is_string())
                    patch = entry["patch"].get<std::string>();
                pr.files.push_back(
                    make_file_change(entry["filename"].get<std::string>(), std::move(patch)));
            }
            if (listing.size() < policy.page_size) break;
        }
    }

    nlohmann::json get_json(const std::string& path, const FetchPolicy& policy) const {
        std::chrono::milliseconds delay = policy.backoff.initial;
        for (std::size_t attempt = 0;; ++attempt) {
            httplib::Client client(base_url_);
            client.set_connection_timeout(10, 0);
            client.set_read_timeout(30, 0);
            httplib::Headers headers{{"User-Agent", "tailguard"},
                                     {"Accept", "application/vnd.github+json"}};
            if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

            auto res = client.Get(path, headers);
            if (res) {
                if (res->status == 200) {
                    try {
                        return nlohmann::json::parse(res->body);
                    } catch (const nlohmann::json::parse_error& e) {
                        throw FetchError(FetchErrorKind::Transport,
                                         "response is not valid JSON: " + std::string(e.what()));
                    }
                }
                if (res->status == 401)
                    throw FetchError(FetchErrorKind::AuthFailure, "authentication failed (401)");
                if (res->status == 404)
                    throw FetchError(FetchErrorKind::RepoNotFound, "not found (404): " + path);
                if (res->status == 403 || res->status == 429) {
                    if (attempt >= policy.retry_budget) {
                        std::optional<std::string> reset;
                        const std::string value = res->get_header_value("X-RateLimit-Reset");
                        if (!value.empty()) reset = value;
                        throw FetchError(FetchErrorKind::RateLimited,
                                         "rate limited after " + std::to_string(attempt + 1) +
                                             " attempts",
                                         reset);
                    }
                } else if (res->status >= 500) {
                    if (attempt >= policy.retry_budget)
                        throw FetchError(FetchErrorKind::Transport,
                                         "server error " + std::to_string(res->status) + " on " +
                                             path);
                } else {
                    throw FetchError(FetchErrorKind::Transport,
                                     "unexpected status " + std::to_string(res->status) + " on " +
                                         path);
                }
            } else if (attempt >= policy.retry_budget) {
                throw FetchError(FetchErrorKind::Transport,
                                 "connection to " + base_url_ + " failed");
            }

            std::this_thread::sleep_for(delay);
            delay = std::chrono::milliseconds(static_cast<std::int64_t>(
                static_cast<double>(delay.count()) * policy.backoff.multiplier));
        }
    }

    std::string base_url_;
    std::string token_;
};

inline std::vector<PullRequest> fetch_repo_pull_requests(const std::string& repo,
                                                         const std::string& token,
                                                         const FetchPolicy& policy = {},
                                                         const std::string& base_url =
                                                             "https://api.github.com",
                                                         const ProgressFn& progress = {}) {
    return ForgeClient(base_url, token).fetch_repo_pull_requests(repo, policy, progress);
}

}  // namespace tailguard
