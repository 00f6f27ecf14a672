#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "tailguard/core/model.hpp"

namespace tailguard {

/// Which extensions count as JavaScript. `Extended` additionally treats
/// .jsx/.mjs/.cjs as JavaScript; `JsOnly` restricts to literal .js.
enum class JsExtensionMode { Extended, JsOnly };

inline std::string_view path_basename(std::string_view path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string_view::npos ? path : path.substr(pos + 1);
}

inline std::string lowercase_extension(std::string_view path) {
    const auto base = path_basename(path);
    const auto dot = base.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0) return {};
    std::string ext(base.substr(dot + 1));
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

/// Total partition of paths into file kinds. Basename `package.json` wins in
/// any directory; everything else is decided by (case-insensitive) extension.
inline FileKind classify_file_change(std::string_view path,
                                     JsExtensionMode mode = JsExtensionMode::Extended) {
    if (path_basename(path) == "package.json") return FileKind::Manifest;
    const std::string ext = lowercase_extension(path);
    if (ext == "js") return FileKind::JavaScript;
    if (mode == JsExtensionMode::Extended && (ext == "jsx" || ext == "mjs" || ext == "cjs"))
        return FileKind::JavaScript;
    if (ext == "md") return FileKind::Markdown;
    if (ext == "json") return FileKind::JsonOther;
    return FileKind::Other;
}

}  // namespace tailguard
