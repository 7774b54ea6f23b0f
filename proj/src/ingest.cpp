#include "influence/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"

namespace influence {

namespace {

using nlohmann::json;

constexpr std::string_view kTaxonomyDirective = "# taxonomy:";

std::string slurp(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Splits off the first physical line; `rest` begins after its terminator.
std::string_view first_line(std::string_view text, std::string_view& rest) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) {
        rest = {};
        return text;
    }
    rest = text.substr(nl + 1);
    auto line = text.substr(0, nl);
    if (line.ends_with('\r')) {
        line.remove_suffix(1);
    }
    return line;
}

// Reads and checks the header record. Returns false (with an error
// recorded) when it is missing or does not match.
bool expect_header(csv::Reader& reader, const std::vector<std::string>& expected, ValidationReport& report,
                   std::string_view file, std::string_view empty_code) {
    auto header = reader.next();
    if (!header) {
        report.error(file, 1, empty_code, fmt::format("missing header '{}'", csv::join(expected)));
        return false;
    }
    if (header->error || header->record.fields != expected) {
        report.error(file, header->record.line, codes::kMalformedRecord,
                     fmt::format("expected header '{}'", csv::join(expected)));
        return false;
    }
    return true;
}

} // namespace

bool ValidationReport::has_io_error() const {
    return std::any_of(errors.begin(), errors.end(), [](const Diagnostic& d) { return d.code == codes::kIoError; });
}

void ValidationReport::error(std::string_view file, std::size_t line, std::string_view code, std::string message) {
    errors.push_back({std::string(file), line, std::string(code), std::move(message)});
}

void ValidationReport::warn(std::string_view file, std::size_t line, std::string_view code, std::string message) {
    warnings.push_back({std::string(file), line, std::string(code), std::move(message)});
}

std::string format_diagnostic(const Diagnostic& d, std::string_view severity) {
    return fmt::format("{}:{}: {} {}: {}", d.file, d.line, severity, d.code, d.message);
}

AccountsFile parse_accounts(std::istream& in, ValidationReport& report, std::string_view file) {
    AccountsFile result;
    const std::string buffer = slurp(in);
    std::string_view text = csv::strip_bom(buffer);
    std::size_t first = 1;
    bool declared = false;

    if (text.starts_with(kTaxonomyDirective)) {
        std::string_view rest;
        const auto line = first_line(text, rest);
        text = rest;
        first = 2;
        declared = true;
        csv::Reader labels(trim(line.substr(kTaxonomyDirective.size())));
        auto rec = labels.next();
        std::set<std::string> unique;
        if (!rec || rec->error) {
            report.error(file, 1, codes::kMalformedRecord, "taxonomy line holds no labels");
        } else {
            for (const auto& label : rec->record.fields) {
                if (label.empty() || !unique.insert(label).second) {
                    report.error(file, 1, codes::kMalformedRecord,
                                 fmt::format("taxonomy label '{}' is empty or repeated", label));
                    continue;
                }
                result.taxonomy.push_back(label);
            }
        }
    }

    csv::Reader reader(text, first);
    report.record_counts[std::string(file)] = 0;
    if (!expect_header(reader, {"id", "handle", "category", "follower_count"}, report, file, codes::kEmptyDataset)) {
        return result;
    }

    std::set<AccountId> accepted;
    std::size_t records = 0;
    while (auto next = reader.next()) {
        ++records;
        const auto line = next->record.line;
        const auto& f = next->record.fields;
        if (!f.empty() && AccountId::is_valid(f[0])) {
            result.seen_ids.insert(AccountId(f[0]));
        }
        if (next->error) {
            report.error(file, line, codes::kMalformedRecord, *next->error);
            continue;
        }
        if (f.size() != 4) {
            report.error(file, line, codes::kMalformedRecord, fmt::format("expected 4 fields, found {}", f.size()));
            continue;
        }
        if (!AccountId::is_valid(f[0])) {
            report.error(file, line, codes::kMalformedRecord,
                         fmt::format("account id '{}' is empty or contains whitespace", f[0]));
            continue;
        }
        if (f[2].empty() || f[2].find_first_of("\r\n") != std::string::npos) {
            report.error(file, line, codes::kMalformedRecord, "category is empty or spans lines");
            continue;
        }
        const std::string_view count = f[3];
        if (count.starts_with('-') && all_digits(count.substr(1))) {
            report.error(file, line, codes::kNegativeFollowerCount,
                         fmt::format("follower_count {} is negative", count));
            continue;
        }
        std::uint64_t followers = 0;
        const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), followers);
        if (!all_digits(count) || ec != std::errc() || ptr != count.data() + count.size()) {
            report.error(file, line, codes::kMalformedRecord,
                         fmt::format("follower_count '{}' is not a nonnegative base-10 integer", count));
            continue;
        }
        AccountId id(f[0]);
        if (accepted.contains(id)) {
            report.error(file, line, codes::kDuplicateAccountId, fmt::format("duplicate account id '{}'", f[0]));
            continue;
        }
        if (declared) {
            if (std::find(result.taxonomy.begin(), result.taxonomy.end(), f[2]) == result.taxonomy.end()) {
                report.error(file, line, codes::kUnknownCategory,
                             fmt::format("category '{}' is not in the declared taxonomy", f[2]));
                continue;
            }
        } else if (std::find(result.taxonomy.begin(), result.taxonomy.end(), f[2]) == result.taxonomy.end()) {
            result.taxonomy.push_back(f[2]);
        }
        accepted.insert(id);
        result.profiles.push_back({std::move(id), f[1], f[2], followers});
    }
    report.record_counts[std::string(file)] = records;
    if (records == 0) {
        report.error(file, 1, codes::kEmptyDataset, "accounts file holds no records");
    }
    return result;
}

std::vector<Edge> parse_edges(std::istream& in, const std::set<AccountId>& known, ValidationReport& report,
                              std::string_view file) {
    std::vector<Edge> edges;
    const std::string buffer = slurp(in);
    csv::Reader reader(csv::strip_bom(buffer));
    report.record_counts[std::string(file)] = 0;
    if (!expect_header(reader, {"src", "dst"}, report, file, codes::kMalformedRecord)) {
        return edges;
    }

    std::set<std::pair<AccountId, AccountId>> seen;
    std::size_t records = 0;
    while (auto next = reader.next()) {
        ++records;
        const auto line = next->record.line;
        if (next->error) {
            report.error(file, line, codes::kMalformedRecord, *next->error);
            continue;
        }
        const auto& f = next->record.fields;
        if (f.size() != 2) {
            report.error(file, line, codes::kMalformedRecord, fmt::format("expected 2 fields, found {}", f.size()));
            continue;
        }
        if (!AccountId::is_valid(f[0]) || !AccountId::is_valid(f[1])) {
            report.error(file, line, codes::kMalformedRecord, "edge endpoint is empty or contains whitespace");
            continue;
        }
        AccountId a(f[0]);
        AccountId b(f[1]);
        if (!known.contains(a) || !known.contains(b)) {
            report.error(file, line, codes::kUnknownEndpoint,
                         fmt::format("edge ({},{}) references unknown account '{}'", f[0], f[1],
                                     known.contains(a) ? f[1] : f[0]));
            continue;
        }
        if (a == b) {
            report.error(file, line, codes::kSelfLoop, fmt::format("edge ({},{}) is a self-loop", f[0], f[1]));
            continue;
        }
        auto key = a < b ? std::pair{a, b} : std::pair{b, a};
        if (!seen.insert(std::move(key)).second) {
            report.warn(file, line, codes::kDuplicateEdge, fmt::format("duplicate edge ({},{}) ignored", f[0], f[1]));
            continue;
        }
        edges.emplace_back(std::move(a), std::move(b));
    }
    report.record_counts[std::string(file)] = records;
    return edges;
}

namespace {

// Reads one engagement array into a set. Returns an error message on a type
// problem; records a warning on duplicates.
std::optional<std::string> read_engagers(const json& object, const char* key, std::set<AccountId>& out,
                                         bool& duplicates) {
    const auto it = object.find(key);
    if (it == object.end()) {
        return std::nullopt;
    }
    if (!it->is_array()) {
        return fmt::format("'{}' must be an array of account ids", key);
    }
    for (const auto& item : *it) {
        if (!item.is_string() || !AccountId::is_valid(item.get_ref<const std::string&>())) {
            return fmt::format("'{}' holds an entry that is not a valid account id", key);
        }
        if (!out.insert(AccountId(item.get<std::string>())).second) {
            duplicates = true;
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<Post> parse_posts(std::istream& in, const std::set<AccountId>& known, ValidationReport& report,
                              std::string_view file) {
    std::vector<Post> posts;
    const std::string buffer = slurp(in);
    std::string_view text = csv::strip_bom(buffer);
    std::set<std::string> post_ids;
    std::size_t records = 0;
    std::size_t line_no = 0;

    while (!text.empty()) {
        std::string_view rest;
        const auto line = first_line(text, rest);
        text = rest;
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        ++records;

        json object;
        try {
            object = json::parse(line);
        } catch (const json::parse_error& e) {
            report.error(file, line_no, codes::kMalformedRecord, fmt::format("invalid JSON: {}", e.what()));
            continue;
        }
        if (!object.is_object()) {
            report.error(file, line_no, codes::kMalformedRecord, "record is not a JSON object");
            continue;
        }

        const auto id_it = object.find("post_id");
        if (id_it == object.end() || !id_it->is_string() || id_it->get_ref<const std::string&>().empty()) {
            report.error(file, line_no, codes::kMalformedRecord, "'post_id' must be a nonempty string");
            continue;
        }
        const auto author_it = object.find("author");
        if (author_it == object.end() || !author_it->is_string() ||
            !AccountId::is_valid(author_it->get_ref<const std::string&>())) {
            report.error(file, line_no, codes::kMalformedRecord, "'author' must be a valid account id");
            continue;
        }

        Post post;
        post.post_id = id_it->get<std::string>();
        post.author = AccountId(author_it->get<std::string>());

        std::optional<std::string> problem;
        bool dup_likers = false;
        bool dup_mentioners = false;
        bool dup_retweeters = false;
        if (!problem) problem = read_engagers(object, "likers", post.likers, dup_likers);
        if (!problem) problem = read_engagers(object, "mentioners", post.mentioners, dup_mentioners);
        if (!problem) problem = read_engagers(object, "retweeters", post.retweeters, dup_retweeters);
        if (problem) {
            report.error(file, line_no, codes::kMalformedRecord, *problem);
            continue;
        }
        if (!known.contains(post.author)) {
            report.error(file, line_no, codes::kUnknownAuthor,
                         fmt::format("post '{}' is authored by unknown account '{}'", post.post_id,
                                     post.author.str()));
            continue;
        }
        if (!post_ids.insert(post.post_id).second) {
            report.error(file, line_no, codes::kDuplicatePostId, fmt::format("duplicate post id '{}'", post.post_id));
            continue;
        }

        for (const auto& [key, value] : object.items()) {
            if (key != "post_id" && key != "author" && key != "likers" && key != "mentioners" && key != "retweeters") {
                report.warn(file, line_no, codes::kUnknownField, fmt::format("unknown field '{}' ignored", key));
            }
        }
        const std::pair<const char*, bool> dups[] = {
            {"likers", dup_likers}, {"mentioners", dup_mentioners}, {"retweeters", dup_retweeters}};
        for (const auto& [name, dup] : dups) {
            if (dup) {
                report.warn(file, line_no, codes::kDuplicateEngager,
                            fmt::format("post '{}': duplicate entries in '{}' collapsed", post.post_id, name));
            }
        }
        std::set<AccountId>* sets[] = {&post.likers, &post.mentioners, &post.retweeters};
        const char* names[] = {"likers", "mentioners", "retweeters"};
        for (std::size_t i = 0; i < 3; ++i) {
            if (sets[i]->erase(post.author) != 0) {
                report.warn(file, line_no, codes::kSelfEngagement,
                            fmt::format("post '{}': author removed from its own '{}'", post.post_id, names[i]));
            }
        }
        posts.push_back(std::move(post));
    }
    report.record_counts[std::string(file)] = records;
    return posts;
}

const std::vector<Post>& Dataset::posts_of(const AccountId& id) const {
    static const std::vector<Post> kNone;
    const auto it = posts.find(id);
    return it == posts.end() ? kNone : it->second;
}

std::size_t Dataset::post_count() const {
    std::size_t n = 0;
    for (const auto& [id, list] : posts) {
        n += list.size();
    }
    return n;
}

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
    return {dir / "accounts.csv", dir / "edges.csv", dir / "posts.jsonl"};
}

LoadResult load_dataset(std::istream& accounts, std::istream& edges, std::istream& posts,
                        std::string_view accounts_name, std::string_view edges_name, std::string_view posts_name) {
    LoadResult result;
    auto& report = result.report;

    auto parsed_accounts = parse_accounts(accounts, report, accounts_name);
    auto parsed_edges = parse_edges(edges, parsed_accounts.seen_ids, report, edges_name);
    auto parsed_posts = parse_posts(posts, parsed_accounts.seen_ids, report, posts_name);
    if (!report.ok()) {
        return result;
    }

    Dataset dataset;
    dataset.taxonomy = std::move(parsed_accounts.taxonomy);
    std::vector<AccountId> ids;
    ids.reserve(parsed_accounts.profiles.size());
    for (auto& profile : parsed_accounts.profiles) {
        ids.push_back(profile.id);
        dataset.posts[profile.id];
        dataset.profiles.emplace(profile.id, std::move(profile));
    }
    dataset.graph = build_graph(ids, parsed_edges);
    for (auto& post : parsed_posts) {
        dataset.posts[post.author].push_back(std::move(post));
    }
    result.dataset = std::move(dataset);
    return result;
}

LoadResult load_dataset(const DatasetPaths& paths) {
    std::ifstream accounts(paths.accounts, std::ios::binary);
    std::ifstream edges(paths.edges, std::ios::binary);
    std::ifstream posts(paths.posts, std::ios::binary);

    ValidationReport io;
    const std::pair<const std::ifstream*, const std::filesystem::path*> files[] = {
        {&accounts, &paths.accounts}, {&edges, &paths.edges}, {&posts, &paths.posts}};
    for (const auto& [stream, path] : files) {
        if (!*stream) {
            io.error(path->string(), 0, codes::kIoError, fmt::format("cannot open '{}'", path->string()));
        }
    }
    if (!io.ok()) {
        return {std::nullopt, std::move(io)};
    }
    return load_dataset(accounts, edges, posts, paths.accounts.string(), paths.edges.string(), paths.posts.string());
}

void write_accounts(const Dataset& dataset, std::ostream& out) {
    out << kTaxonomyDirective << ' ' << csv::join(dataset.taxonomy) << '\n';
    out << "id,handle,category,follower_count\n";
    for (const auto& [id, p] : dataset.profiles) {
        out << csv::join({p.id.str(), p.handle, p.category, std::to_string(p.follower_count)}) << '\n';
    }
}

void write_edges(const Dataset& dataset, std::ostream& out) {
    out << "src,dst\n";
    for (const auto& [a, b] : dataset.graph.edges()) {
        out << csv::join({a.str(), b.str()}) << '\n';
    }
}

void write_posts(const Dataset& dataset, std::ostream& out) {
    auto ids = [](const std::set<AccountId>& set) {
        json arr = json::array();
        for (const auto& id : set) {
            arr.push_back(id.str());
        }
        return arr;
    };
    for (const auto& [author, list] : dataset.posts) {
        for (const auto& post : list) {
            json object = {{"post_id", post.post_id},
                           {"author", post.author.str()},
                           {"likers", ids(post.likers)},
                           {"mentioners", ids(post.mentioners)},
                           {"retweeters", ids(post.retweeters)}};
            out << object.dump() << '\n';
        }
    }
}

std::string dataset_fingerprint(const Dataset& dataset) {
    std::ostringstream buffer;
    write_accounts(dataset, buffer);
    write_edges(dataset, buffer);
    write_posts(dataset, buffer);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : buffer.str()) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return fmt::format("fnv1a64:{:016x}", hash);
}

} // namespace influence
