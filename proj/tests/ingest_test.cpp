#include "influence/ingest.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "csv.hpp"
#include "support.hpp"

namespace influence {
namespace {

const char* kAccounts = "id,handle,category,follower_count\n"
                        "a,Alpha,main,100\n"
                        "b,Beta,regional,50\n"
                        "c,Gamma,main,10\n";

AccountsFile accounts_from(const std::string& text, ValidationReport& report) {
    std::istringstream in(text);
    return parse_accounts(in, report);
}

std::set<AccountId> known(std::initializer_list<const char*> names) {
    std::set<AccountId> out;
    for (const auto* n : names) out.emplace(n);
    return out;
}

std::vector<std::string> error_codes(const ValidationReport& r) {
    std::vector<std::string> out;
    for (const auto& e : r.errors) out.push_back(e.code);
    return out;
}

TEST(CsvReaderTest, QuotedFieldsAndLineTracking) {
    csv::Reader reader("a,\"b,\"\"c\"\"\"\r\n\n\"multi\nline\",x\nlast");
    auto r1 = reader.next();
    ASSERT_TRUE(r1 && !r1->error);
    EXPECT_EQ(r1->record.line, 1u);
    EXPECT_EQ(r1->record.fields, (std::vector<std::string>{"a", "b,\"c\""}));
    auto r2 = reader.next();
    ASSERT_TRUE(r2 && !r2->error);
    EXPECT_EQ(r2->record.line, 3u);
    EXPECT_EQ(r2->record.fields, (std::vector<std::string>{"multi\nline", "x"}));
    auto r3 = reader.next();
    ASSERT_TRUE(r3 && !r3->error);
    EXPECT_EQ(r3->record.line, 5u);
    EXPECT_FALSE(reader.next());
}

TEST(CsvReaderTest, MalformedRecordsResynchronize) {
    csv::Reader reader("ok,1\nba\"d,2\n\"x\"y,3\nfine,4\n\"open,5\n");
    std::vector<std::pair<std::size_t, bool>> seen;
    while (auto r = reader.next()) seen.emplace_back(r->record.line, r->error.has_value());
    EXPECT_EQ(seen, (std::vector<std::pair<std::size_t, bool>>{{1, false}, {2, true}, {3, true}, {4, false}, {5, true}}));
}

TEST(CsvReaderTest, QuoteRoundTrip) {
    for (const std::string s : {"plain", "a,b", "q\"q", "nl\nx", "", " sp "}) {
        csv::Reader reader(csv::join({s, "z"}));
        auto r = reader.next();
        ASSERT_TRUE(r && !r->error);
        EXPECT_EQ(r->record.fields[0], s);
    }
}

TEST(CsvReaderTest, Utf8Validation) {
    EXPECT_TRUE(csv::is_valid_utf8("caf\xC3\xA9 \xF0\x9F\x98\x80"));
    EXPECT_FALSE(csv::is_valid_utf8("\xC3"));
    EXPECT_FALSE(csv::is_valid_utf8("\xC0\xAF"));        // overlong
    EXPECT_FALSE(csv::is_valid_utf8("\xED\xA0\x80"));    // surrogate
    EXPECT_FALSE(csv::is_valid_utf8("\xFF"));
}

TEST(ParseAccountsTest, FieldMapping) {
    ValidationReport report;
    const auto parsed = accounts_from("id,handle,category,follower_count\ntsel_main,Telkomsel,main,14000000\n", report);
    ASSERT_TRUE(report.ok());
    ASSERT_EQ(parsed.profiles.size(), 1u);
    EXPECT_EQ(parsed.profiles[0].id, AccountId("tsel_main"));
    EXPECT_EQ(parsed.profiles[0].handle, "Telkomsel");
    EXPECT_EQ(parsed.profiles[0].category, "main");
    EXPECT_EQ(parsed.profiles[0].follower_count, 14000000u);
}

TEST(ParseAccountsTest, TaxonomyByFirstAppearance) {
    ValidationReport report;
    const auto parsed = accounts_from(kAccounts, report);
    EXPECT_EQ(parsed.taxonomy, (std::vector<std::string>{"main", "regional"}));
}

TEST(ParseAccountsTest, DeclaredTaxonomyKeepsOrderAndUnusedLabels) {
    ValidationReport report;
    const auto parsed = accounts_from("# taxonomy: partner,main,regional\n" + std::string(kAccounts), report);
    ASSERT_TRUE(report.ok());
    EXPECT_EQ(parsed.taxonomy, (std::vector<std::string>{"partner", "main", "regional"}));
}

TEST(ParseAccountsTest, UndeclaredCategoryRejected) {
    ValidationReport report;
    accounts_from("# taxonomy: main\n" + std::string(kAccounts), report);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_EQ(report.errors[0].code, codes::kUnknownCategory);
    EXPECT_EQ(report.errors[0].line, 4u);
}

TEST(ParseAccountsTest, DuplicateIdAtSecondLine) {
    ValidationReport report;
    accounts_from("id,handle,category,follower_count\na,A,main,1\na,A2,main,2\n", report);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_EQ(report.errors[0].code, codes::kDuplicateAccountId);
    EXPECT_EQ(report.errors[0].line, 3u);
}

TEST(ParseAccountsTest, NegativeFollowerCount) {
    ValidationReport report;
    accounts_from("id,handle,category,follower_count\na,A,main,-3\n", report);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_EQ(report.errors[0].code, codes::kNegativeFollowerCount);
    EXPECT_EQ(report.errors[0].line, 2u);
}

TEST(ParseAccountsTest, EveryMalformedRecordReported) {
    ValidationReport report;
    accounts_from("id,handle,category,follower_count\n"
                  "a,A,main,1x\n"
                  "b,B,main\n"
                  "c,C,main,3\n"
                  "d d,D,main,4\n"
                  ",E,main,5\n"
                  "f,F,,6\n"
                  "g,G,main,+7\n"
                  "h,H,main,99999999999999999999999\n",
                  report);
    EXPECT_EQ(report.errors.size(), 7u);
    std::vector<std::size_t> lines;
    for (const auto& e : report.errors) lines.push_back(e.line);
    EXPECT_EQ(lines, (std::vector<std::size_t>{2, 3, 5, 6, 7, 8, 9}));
}

TEST(ParseAccountsTest, EmptyFileAndHeaderOnly) {
    ValidationReport empty;
    accounts_from("", empty);
    EXPECT_EQ(error_codes(empty), std::vector<std::string>{std::string(codes::kEmptyDataset)});
    ValidationReport header_only;
    accounts_from("id,handle,category,follower_count\n", header_only);
    EXPECT_EQ(error_codes(header_only), std::vector<std::string>{std::string(codes::kEmptyDataset)});
}

TEST(ParseAccountsTest, BomAndCrlfAccepted) {
    ValidationReport report;
    const auto parsed = accounts_from("\xEF\xBB\xBFid,handle,category,follower_count\r\na,A,main,1\r\n", report);
    ASSERT_TRUE(report.ok());
    ASSERT_EQ(parsed.profiles.size(), 1u);
    EXPECT_EQ(parsed.profiles[0].follower_count, 1u);
}

TEST(ParseAccountsTest, WrongHeader) {
    ValidationReport report;
    accounts_from("id,name,category,followers\na,A,main,1\n", report);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_EQ(report.errors[0].line, 1u);
}

TEST(ParseEdgesTest, ReversedDuplicateWarns) {
    ValidationReport report;
    std::istringstream in("src,dst\na,b\nb,a\n");
    const auto edges = parse_edges(in, known({"a", "b"}), report);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(edges.size(), 1u);
    ASSERT_EQ(report.warnings.size(), 1u);
    EXPECT_EQ(report.warnings[0].code, codes::kDuplicateEdge);
    EXPECT_EQ(report.warnings[0].line, 3u);
}

TEST(ParseEdgesTest, UnknownEndpointAndSelfLoop) {
    ValidationReport report;
    std::istringstream in("src,dst\na,z\na,a\na\n");
    parse_edges(in, known({"a", "b"}), report);
    EXPECT_EQ(error_codes(report), (std::vector<std::string>{"UnknownEndpoint", "SelfLoop", "MalformedRecord"}));
    EXPECT_EQ(report.errors[0].line, 2u);
    EXPECT_EQ(report.errors[1].line, 3u);
    EXPECT_EQ(report.errors[2].line, 4u);
}

std::vector<Post> posts_from(const std::string& text, ValidationReport& report) {
    std::istringstream in(text);
    return parse_posts(in, known({"a", "b"}), report);
}

TEST(ParsePostsTest, DuplicateEngagersCollapsed) {
    ValidationReport report;
    const auto posts = posts_from(R"({"post_id":"p1","author":"a","likers":["x","x","y"]})", report);
    ASSERT_TRUE(report.ok());
    ASSERT_EQ(posts.size(), 1u);
    EXPECT_EQ(posts[0].likers.size(), 2u);
    ASSERT_EQ(report.warnings.size(), 1u);
    EXPECT_EQ(report.warnings[0].code, codes::kDuplicateEngager);
}

TEST(ParsePostsTest, UnknownAuthor) {
    ValidationReport report;
    posts_from(R"({"post_id":"p1","author":"zz"})", report);
    EXPECT_EQ(error_codes(report), std::vector<std::string>{"UnknownAuthor"});
}

TEST(ParsePostsTest, SelfEngagementStripped) {
    ValidationReport report;
    const auto posts = posts_from(R"({"post_id":"p1","author":"a","retweeters":["a","b"]})", report);
    ASSERT_TRUE(report.ok());
    EXPECT_EQ(posts[0].retweeters, known({"b"}));
    ASSERT_EQ(report.warnings.size(), 1u);
    EXPECT_EQ(report.warnings[0].code, codes::kSelfEngagement);
}

TEST(ParsePostsTest, OmittedArraysAreEmptyAndOutsideEngagersAllowed) {
    ValidationReport report;
    const auto posts = posts_from("{\"post_id\":\"p1\",\"author\":\"a\"}\n\n"
                                  "{\"post_id\":\"p2\",\"author\":\"b\",\"mentioners\":[\"outsider\"]}\r\n",
                                  report);
    ASSERT_TRUE(report.ok());
    ASSERT_EQ(posts.size(), 2u);
    EXPECT_TRUE(posts[0].likers.empty());
    EXPECT_EQ(posts[1].mentioners, known({"outsider"}));
    EXPECT_EQ(report.record_counts.at("posts.jsonl"), 2u);
}

TEST(ParsePostsTest, ErrorsWithLines) {
    ValidationReport report;
    posts_from("{\"post_id\":\"p1\",\"author\":\"a\"}\n"
               "{not json\n"
               "{\"post_id\":\"p1\",\"author\":\"b\"}\n"
               "[1,2]\n"
               "{\"post_id\":\"p3\",\"author\":\"a\",\"likers\":\"x\"}\n"
               "{\"post_id\":\"p4\",\"author\":\"a\",\"likers\":[\"has space\"]}\n"
               "{\"author\":\"a\"}\n",
               report);
    EXPECT_EQ(error_codes(report), (std::vector<std::string>{"MalformedRecord", "DuplicatePostId", "MalformedRecord",
                                                             "MalformedRecord", "MalformedRecord", "MalformedRecord"}));
    std::vector<std::size_t> lines;
    for (const auto& e : report.errors) lines.push_back(e.line);
    EXPECT_EQ(lines, (std::vector<std::size_t>{2, 3, 4, 5, 6, 7}));
}

TEST(LoadDatasetTest, UnknownAuthorIsAtomic) {
    std::istringstream a(kAccounts), e("src,dst\na,b\n"), p("{\"post_id\":\"p\",\"author\":\"nobody\"}\n");
    const auto result = load_dataset(a, e, p);
    EXPECT_FALSE(result.dataset);
    EXPECT_EQ(error_codes(result.report), std::vector<std::string>{"UnknownAuthor"});
}

TEST(LoadDatasetTest, MissingFileIsIoError) {
    const auto result = load_dataset(DatasetPaths::in_directory("/nonexistent/dir"));
    EXPECT_FALSE(result.dataset);
    EXPECT_TRUE(result.report.has_io_error());
    EXPECT_EQ(result.report.errors.size(), 3u);
}

TEST(LoadDatasetTest, BadAccountRowDoesNotCascade) {
    std::istringstream a("id,handle,category,follower_count\na,A,main,oops\nb,B,main,1\n"), e("src,dst\na,b\n"),
        p("{\"post_id\":\"p\",\"author\":\"a\"}\n");
    const auto result = load_dataset(a, e, p);
    EXPECT_EQ(error_codes(result.report), std::vector<std::string>{"MalformedRecord"});
}

TEST(LoadDatasetTest, BundledFixture) {
    const auto result = load_dataset(DatasetPaths::in_directory(INFLUENCE_FIXTURE_DIR));
    ASSERT_TRUE(result.dataset) << (result.report.errors.empty() ? "" : result.report.errors[0].message);
    EXPECT_TRUE(result.report.warnings.empty());
    EXPECT_EQ(result.dataset->profiles.size(), 65u);
    EXPECT_EQ(result.dataset->taxonomy.size(), 6u);
    EXPECT_EQ(result.dataset->graph.node_count(), 65u);
}

TEST(RoundTripTest, RandomDatasetsWithAwkwardText) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = testing::random_dataset(rng);
        const auto first = testing::load(testing::serialize(ds));
        ASSERT_TRUE(first.dataset) << trial << ": " << first.report.errors.at(0).message;
        EXPECT_EQ(*first.dataset, ds);
        const auto second = testing::load(testing::serialize(*first.dataset));
        ASSERT_TRUE(second.dataset);
        EXPECT_EQ(*second.dataset, *first.dataset);
    }
}

TEST(ParserTotalityTest, RandomBytesNeverCrash) {
    std::mt19937_64 rng(5);
    const std::string alphabet = "ab,\"\n\r{}[]:#\\ \xC3\xA9\xFF\x00xyz0123-";
    for (int trial = 0; trial < 2000; ++trial) {
        std::string bytes;
        const auto len = std::uniform_int_distribution<int>(0, 80)(rng);
        for (int i = 0; i < len; ++i) {
            bytes.push_back(std::bernoulli_distribution(0.2)(rng)
                                ? static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng))
                                : alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
        }
        std::istringstream a("id,handle,category,follower_count\n" + bytes), e("src,dst\n" + bytes), p(bytes);
        EXPECT_NO_THROW({
            const auto r = load_dataset(a, e, p);
            EXPECT_EQ(r.dataset.has_value(), r.report.ok());
        });
        std::istringstream raw(bytes);
        ValidationReport report;
        EXPECT_NO_THROW(parse_accounts(raw, report));
    }
}

TEST(FingerprintTest, StableAndContentSensitive) {
    std::mt19937_64 rng(8);
    auto ds = testing::random_dataset(rng);
    EXPECT_EQ(dataset_fingerprint(ds), dataset_fingerprint(ds));
    auto changed = ds;
    changed.profiles.begin()->second.follower_count += 1;
    EXPECT_NE(dataset_fingerprint(ds), dataset_fingerprint(changed));
}

} // namespace
} // namespace influence
