#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "influence/engagement.hpp"
#include "influence/graph.hpp"

namespace influence {

/// Error and warning codes emitted while reading input files.
namespace codes {
inline constexpr std::string_view kIoError = "IoError";
inline constexpr std::string_view kMalformedRecord = "MalformedRecord";
inline constexpr std::string_view kEmptyDataset = "EmptyDataset";
inline constexpr std::string_view kDuplicateAccountId = "DuplicateAccountId";
inline constexpr std::string_view kNegativeFollowerCount = "NegativeFollowerCount";
inline constexpr std::string_view kUnknownCategory = "UnknownCategory";
inline constexpr std::string_view kUnknownEndpoint = "UnknownEndpoint";
inline constexpr std::string_view kSelfLoop = "SelfLoop";
inline constexpr std::string_view kDuplicateEdge = "DuplicateEdge";
inline constexpr std::string_view kUnknownAuthor = "UnknownAuthor";
inline constexpr std::string_view kDuplicatePostId = "DuplicatePostId";
inline constexpr std::string_view kDuplicateEngager = "DuplicateEngager";
inline constexpr std::string_view kSelfEngagement = "SelfEngagement";
inline constexpr std::string_view kUnknownField = "UnknownField";
} // namespace codes

struct Diagnostic {
    std::string file;
    /// 1-based line of the offending record; 0 when the whole file is at fault.
    std::size_t line = 0;
    std::string code;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationReport {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;
    std::map<std::string, std::size_t> record_counts;

    bool ok() const noexcept { return errors.empty(); }
    bool has_io_error() const;

    void error(std::string_view file, std::size_t line, std::string_view code, std::string message);
    void warn(std::string_view file, std::size_t line, std::string_view code, std::string message);
};

/// "file:line: error CODE: message"
std::string format_diagnostic(const Diagnostic& d, std::string_view severity);

struct AccountsFile {
    std::vector<AccountProfile> profiles;
    std::vector<std::string> taxonomy;
    /// Every syntactically valid id seen, including ids of records that were
    /// rejected for other reasons. Downstream files are checked against this
    /// set so one bad account row does not cascade into edge and post errors.
    std::set<AccountId> seen_ids;
};

/// accounts.csv: optional first line `# taxonomy: a,b,...`, then the header
/// `id,handle,category,follower_count`. Without a taxonomy line the
/// taxonomy is the categories in order of first appearance.
AccountsFile parse_accounts(std::istream& in, ValidationReport& report, std::string_view file = "accounts.csv");

/// edges.csv with header `src,dst`. Duplicate and reversed rows are dropped
/// with a DuplicateEdge warning; the first occurrence keeps its orientation.
std::vector<Edge> parse_edges(std::istream& in, const std::set<AccountId>& known, ValidationReport& report,
                              std::string_view file = "edges.csv");

/// posts.jsonl: one object per line. Engagers need not be known accounts.
std::vector<Post> parse_posts(std::istream& in, const std::set<AccountId>& known, ValidationReport& report,
                              std::string_view file = "posts.jsonl");

struct Dataset {
    std::map<AccountId, AccountProfile> profiles;
    SocialGraph graph;
    /// Keyed by every profile id; file order is kept within one author.
    std::map<AccountId, std::vector<Post>> posts;
    std::vector<std::string> taxonomy;

    const std::vector<Post>& posts_of(const AccountId& id) const;
    std::size_t post_count() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct LoadResult {
    std::optional<Dataset> dataset;
    ValidationReport report;
};

struct DatasetPaths {
    std::filesystem::path accounts;
    std::filesystem::path edges;
    std::filesystem::path posts;

    /// accounts.csv, edges.csv and posts.jsonl inside `dir`.
    static DatasetPaths in_directory(const std::filesystem::path& dir);
};

/// Parses all three files and collects every problem in one pass. A Dataset
/// is returned only when the report holds no errors.
LoadResult load_dataset(const DatasetPaths& paths);

LoadResult load_dataset(std::istream& accounts, std::istream& edges, std::istream& posts,
                        std::string_view accounts_name = "accounts.csv", std::string_view edges_name = "edges.csv",
                        std::string_view posts_name = "posts.jsonl");

/// Writers producing files that load back into an identical Dataset.
void write_accounts(const Dataset& dataset, std::ostream& out);
void write_edges(const Dataset& dataset, std::ostream& out);
void write_posts(const Dataset& dataset, std::ostream& out);

/// Content hash of the canonical serialization, "fnv1a64:<hex>".
std::string dataset_fingerprint(const Dataset& dataset);

} // namespace influence
