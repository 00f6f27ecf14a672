#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "tailguard/core/model.hpp"
#include "tailguard/core/validate.hpp"

using namespace tailguard;

TEST_CASE("enum names are stable", "[model]") {
    CHECK(to_string(Outcome::Merged) == "merged");
    CHECK(to_string(Outcome::Closed) == "closed");
    CHECK(to_string(Outcome::Opened) == "opened");
    CHECK(to_string(UnsafeFeature::NewScripts) == "new_scripts");
    CHECK(to_string(UnsafeFeature::HttpAccess) == "http");
    CHECK(to_string(UnsafeFeature::FsUse) == "fs");
    CHECK(to_string(UnsafeFeature::NetUse) == "net");
    CHECK(to_string(UnsafeFeature::EvalUse) == "eval");
    CHECK(to_string(UnsafeFeature::RequireUse) == "require");
    CHECK(to_string(Tier::Top) == "Top");
    CHECK(to_string(Tier::Unsampled) == "Unsampled");
    CHECK(display_name(ChangeType::TestCases) == "Test Cases");
    CHECK(display_name(ChangeType::Other) == "Other");
}

TEST_CASE("corpus normalize orders libraries and pulls", "[model]") {
    Corpus corpus;
    LibraryRecord b;
    b.name = "beta";
    PullRequest p2;
    p2.id = "beta#2";
    PullRequest p1;
    p1.id = "beta#1";
    b.pulls = {p2, p1};
    LibraryRecord a;
    a.name = "alpha";
    corpus.libraries = {b, a};

    corpus.normalize();
    REQUIRE(corpus.libraries.size() == 2);
    CHECK(corpus.libraries[0].name == "alpha");
    CHECK(corpus.libraries[1].pulls[0].id == "beta#1");
    CHECK(corpus.pr_count() == 2);
}

TEST_CASE("validate_pull_request reports violations as data", "[validate]") {
    PullRequest pr;
    pr.id = "x#1";

    SECTION("clean generated PR has no violations") {
        testsupport::Rng rng(7);
        const auto generated = testsupport::random_pull_request(rng, "lib", 1);
        CHECK(validate_pull_request(generated).empty());
    }

    SECTION("empty path") {
        pr.files.push_back(FileChange{});
        const auto v = validate_pull_request(pr);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("empty path") != std::string::npos);
    }

    SECTION("kind not matching path") {
        FileChange fc;
        fc.path = "index.js";
        fc.kind = FileKind::Markdown;
        pr.files.push_back(fc);
        const auto v = validate_pull_request(pr);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("does not match") != std::string::npos);
    }

    SECTION("kind check honors the extension mode") {
        FileChange fc;
        fc.path = "mod.mjs";
        fc.kind = FileKind::JavaScript;
        pr.files.push_back(fc);
        CHECK(validate_pull_request(pr).empty());
        CHECK_FALSE(
            validate_pull_request(pr, ValidationOptions{JsExtensionMode::JsOnly}).empty());
    }

    SECTION("line number bookkeeping") {
        FileChange fc;
        fc.path = "a.js";
        fc.kind = FileKind::JavaScript;
        DiffHunk hunk;
        hunk.new_start = 5;
        DiffLine added;
        added.tag = LineTag::Added;
        added.content = "x";
        hunk.lines.push_back(added);  // missing new_lineno
        DiffLine removed;
        removed.tag = LineTag::Removed;
        removed.new_lineno = 9;  // must not have one
        hunk.lines.push_back(removed);
        fc.hunks.push_back(hunk);
        pr.files.push_back(fc);

        const auto v = validate_pull_request(pr);
        REQUIRE(v.size() == 2);
        CHECK(v[0].find("missing new_lineno") != std::string::npos);
        CHECK(v[1].find("new_lineno on Removed") != std::string::npos);
    }

    SECTION("non-increasing line numbers") {
        FileChange fc;
        fc.path = "a.js";
        fc.kind = FileKind::JavaScript;
        DiffHunk hunk;
        DiffLine l1;
        l1.tag = LineTag::Added;
        l1.new_lineno = 4;
        DiffLine l2;
        l2.tag = LineTag::Added;
        l2.new_lineno = 4;
        hunk.lines = {l1, l2};
        fc.hunks.push_back(hunk);
        pr.files.push_back(fc);
        const auto v = validate_pull_request(pr);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("non-increasing") != std::string::npos);
    }
}

TEST_CASE("validate_corpus flags duplicate ranks and empty names", "[validate]") {
    Corpus corpus;
    LibraryRecord l1;
    l1.name = "one";
    l1.dependents_rank = 3;
    LibraryRecord l2;
    l2.name = "two";
    l2.dependents_rank = 3;
    LibraryRecord l3;  // empty name
    corpus.libraries = {l1, l2, l3};

    const auto v = validate_corpus(corpus);
    REQUIRE(v.size() == 2);
    CHECK(v[0].find("duplicate dependents_rank") != std::string::npos);
    CHECK(v[1].find("empty name") != std::string::npos);
}
