#include <catch2/catch_amalgamated.hpp>

#include "tailguard/diff/file_kind.hpp"

using namespace tailguard;

TEST_CASE("manifest detection is basename-driven", "[file_kind]") {
    CHECK(classify_file_change("package.json") == FileKind::Manifest);
    CHECK(classify_file_change("nested/dir/package.json") == FileKind::Manifest);
    CHECK(classify_file_change("package.json.bak") == FileKind::Other);
    CHECK(classify_file_change("not-package.json") == FileKind::JsonOther);
}

TEST_CASE("javascript extensions honor the mode", "[file_kind]") {
    CHECK(classify_file_change("src/a.js") == FileKind::JavaScript);
    CHECK(classify_file_change("src/a.jsx") == FileKind::JavaScript);
    CHECK(classify_file_change("src/a.mjs") == FileKind::JavaScript);
    CHECK(classify_file_change("src/a.cjs") == FileKind::JavaScript);

    CHECK(classify_file_change("src/a.js", JsExtensionMode::JsOnly) == FileKind::JavaScript);
    CHECK(classify_file_change("src/a.jsx", JsExtensionMode::JsOnly) == FileKind::Other);
    CHECK(classify_file_change("src/a.mjs", JsExtensionMode::JsOnly) == FileKind::Other);
    CHECK(classify_file_change("src/a.cjs", JsExtensionMode::JsOnly) == FileKind::Other);
}

TEST_CASE("extension matching is case-insensitive, path casing preserved elsewhere",
          "[file_kind]") {
    CHECK(classify_file_change("README.MD") == FileKind::Markdown);
    CHECK(classify_file_change("src/App.JSX") == FileKind::JavaScript);
    CHECK(classify_file_change("conf/settings.JSON") == FileKind::JsonOther);
    // The manifest rule matches the exact basename only.
    CHECK(classify_file_change("Package.json") == FileKind::JsonOther);
}

TEST_CASE("everything else is Other", "[file_kind]") {
    CHECK(classify_file_change("Makefile") == FileKind::Other);
    CHECK(classify_file_change("src/main.ts") == FileKind::Other);
    CHECK(classify_file_change("a/b/c.js.map") == FileKind::Other);
    CHECK(classify_file_change("") == FileKind::Other);
    CHECK(classify_file_change(".js") == FileKind::Other);
}
