#include "influence/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"

namespace influence {

using nlohmann::json;

std::string_view to_string(ZeroFollowerPolicy policy) {
    return policy == ZeroFollowerPolicy::Fail ? "fail" : "skip";
}

ZeroFollowerPolicy parse_zero_follower_policy(std::string_view text) {
    if (text == "fail") {
        return ZeroFollowerPolicy::Fail;
    }
    if (text == "skip") {
        return ZeroFollowerPolicy::Skip;
    }
    throw InfluenceError(ErrorCode::InvalidArgument, std::string(text),
                         "zero-follower policy must be 'fail' or 'skip', got '" + std::string(text) + "'");
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void sort_ranked(std::vector<RankedEntry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.account < b.account;
    });
}

MoiTable compute_moi_table(const Dataset& dataset, EngagementMode mode, ZeroFollowerPolicy policy) {
    MoiTable table;
    for (const auto& [id, profile] : dataset.profiles) {
        try {
            table.results.push_back(moi(profile, dataset.posts_of(id), mode));
        } catch (const InfluenceError& e) {
            const bool skippable = e.code() == ErrorCode::NoPosts || e.code() == ErrorCode::ZeroFollowers;
            if (policy == ZeroFollowerPolicy::Fail || !skippable) {
                throw;
            }
            table.exclusions.push_back({id, std::string(to_string(e.code()))});
        }
    }
    return table;
}

namespace {

std::map<AccountId, std::size_t> ordinal_ranks(std::vector<RankedEntry> entries) {
    sort_ranked(entries);
    std::map<AccountId, std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out.emplace(entries[i].account, i + 1);
    }
    return out;
}

} // namespace

RankedReport build_report(const Dataset& dataset, const ReportConfig& config, RankVector* ranks_out,
                          MoiTable* moi_out) {
    if (config.top_k == 0) {
        throw InfluenceError(ErrorCode::InvalidArgument, "top_k", "top_k must be at least 1");
    }
    RankVector ranks = influence_rank(dataset.graph, config.rank);
    MoiTable table = compute_moi_table(dataset, config.mode, config.zero_followers);

    RankedReport report;
    auto& header = report.generated_for;
    header.dataset = dataset_fingerprint(dataset);
    header.mode = std::string(to_string(config.mode));
    header.damping = config.rank.damping;
    header.tolerance = config.rank.tolerance;
    header.max_iterations = config.rank.max_iterations;
    header.top_k = config.top_k;
    header.zero_follower_policy = std::string(to_string(config.zero_followers));
    header.ir_iterations = ranks.iterations;
    header.ir_converged = ranks.converged;
    header.ir_residual = ranks.residual;

    for (const auto& [id, score] : top_k_by_rank(ranks, config.top_k)) {
        report.ir_top.push_back({id, score});
    }

    std::map<std::string, std::vector<RankedEntry>> by_category;
    std::vector<RankedEntry> moi_all;
    std::vector<RankedEntry> ir_ranked;
    for (const auto& result : table.results) {
        const auto& profile = dataset.profiles.at(result.account);
        by_category[profile.category].push_back({result.account, result.moi});
        moi_all.push_back({result.account, result.moi});
        ir_ranked.push_back({result.account, *ranks.score(result.account)});
    }
    for (const auto& category : dataset.taxonomy) {
        CategoryRanking ranking{category, std::move(by_category[category])};
        sort_ranked(ranking.entries);
        report.moi_by_category.push_back(std::move(ranking));
    }
    report.exclusions = table.exclusions;

    const auto ir_rank = ordinal_ranks(std::move(ir_ranked));
    const auto moi_rank = ordinal_ranks(std::move(moi_all));
    for (const auto& [id, ir] : ir_rank) {
        const auto m = moi_rank.at(id);
        report.divergence.push_back(
            {id, ir, m, static_cast<long long>(m) - static_cast<long long>(ir)});
    }
    std::sort(report.divergence.begin(), report.divergence.end(), [](const DivergenceRow& a, const DivergenceRow& b) {
        const auto ga = std::llabs(a.rank_gap);
        const auto gb = std::llabs(b.rank_gap);
        if (ga != gb) {
            return ga > gb;
        }
        return a.account < b.account;
    });

    if (ranks_out != nullptr) {
        *ranks_out = std::move(ranks);
    }
    if (moi_out != nullptr) {
        *moi_out = std::move(table);
    }
    return report;
}

namespace {

json entries_to_json(const std::vector<RankedEntry>& entries, const char* score_key) {
    json arr = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        arr.push_back({{"rank", i + 1}, {"account", entries[i].account.str()}, {score_key, entries[i].score}});
    }
    return arr;
}

std::vector<RankedEntry> entries_from_json(const json& arr, const char* score_key) {
    std::vector<RankedEntry> out;
    for (const auto& item : arr) {
        out.push_back({AccountId(item.at("account").get<std::string>()), item.at(score_key).get<double>()});
    }
    return out;
}

} // namespace

std::string export_json(const RankedReport& report) {
    const auto& h = report.generated_for;
    json doc;
    doc["generated_for"] = {{"dataset", h.dataset},
                            {"mode", h.mode},
                            {"damping", h.damping},
                            {"tolerance", h.tolerance},
                            {"max_iterations", h.max_iterations},
                            {"top_k", h.top_k},
                            {"zero_follower_policy", h.zero_follower_policy},
                            {"ir_iterations", h.ir_iterations},
                            {"ir_converged", h.ir_converged},
                            {"ir_residual", h.ir_residual}};
    doc["ir_top"] = entries_to_json(report.ir_top, "ir");

    json categories = json::array();
    for (const auto& c : report.moi_by_category) {
        categories.push_back({{"category", c.category}, {"ranking", entries_to_json(c.entries, "moi")}});
    }
    doc["moi_by_category"] = std::move(categories);

    json exclusions = json::array();
    for (const auto& e : report.exclusions) {
        exclusions.push_back({{"account", e.account.str()}, {"reason", e.reason}});
    }
    doc["exclusions"] = std::move(exclusions);

    json divergence = json::array();
    for (const auto& d : report.divergence) {
        divergence.push_back({{"account", d.account.str()},
                              {"ir_rank", d.ir_rank},
                              {"moi_rank", d.moi_rank},
                              {"rank_gap", d.rank_gap}});
    }
    doc["divergence"] = std::move(divergence);
    return doc.dump(2) + "\n";
}

RankedReport report_from_json(std::string_view text) {
    const json doc = json::parse(text);
    RankedReport report;
    const auto& g = doc.at("generated_for");
    auto& h = report.generated_for;
    h.dataset = g.at("dataset").get<std::string>();
    h.mode = g.at("mode").get<std::string>();
    h.damping = g.at("damping").get<double>();
    h.tolerance = g.at("tolerance").get<double>();
    h.max_iterations = g.at("max_iterations").get<std::size_t>();
    h.top_k = g.at("top_k").get<std::size_t>();
    h.zero_follower_policy = g.at("zero_follower_policy").get<std::string>();
    h.ir_iterations = g.at("ir_iterations").get<std::size_t>();
    h.ir_converged = g.at("ir_converged").get<bool>();
    h.ir_residual = g.at("ir_residual").get<double>();

    report.ir_top = entries_from_json(doc.at("ir_top"), "ir");
    for (const auto& c : doc.at("moi_by_category")) {
        report.moi_by_category.push_back(
            {c.at("category").get<std::string>(), entries_from_json(c.at("ranking"), "moi")});
    }
    for (const auto& e : doc.at("exclusions")) {
        report.exclusions.push_back({AccountId(e.at("account").get<std::string>()), e.at("reason").get<std::string>()});
    }
    for (const auto& d : doc.at("divergence")) {
        report.divergence.push_back({AccountId(d.at("account").get<std::string>()),
                                     d.at("ir_rank").get<std::size_t>(), d.at("moi_rank").get<std::size_t>(),
                                     d.at("rank_gap").get<long long>()});
    }
    return report;
}

std::vector<std::pair<std::string, std::string>> export_csv(const RankedReport& report) {
    std::vector<std::pair<std::string, std::string>> files;
    const auto& h = report.generated_for;

    std::string meta = "key,value\n";
    const std::pair<const char*, std::string> rows[] = {
        {"dataset", h.dataset},
        {"mode", h.mode},
        {"damping", format_double(h.damping)},
        {"tolerance", format_double(h.tolerance)},
        {"max_iterations", std::to_string(h.max_iterations)},
        {"top_k", std::to_string(h.top_k)},
        {"zero_follower_policy", h.zero_follower_policy},
        {"ir_iterations", std::to_string(h.ir_iterations)},
        {"ir_converged", h.ir_converged ? "true" : "false"},
        {"ir_residual", format_double(h.ir_residual)},
    };
    for (const auto& [key, value] : rows) {
        meta += csv::join({key, value}) + "\n";
    }
    files.emplace_back("metadata.csv", std::move(meta));

    std::string ir = "rank,account,ir\n";
    for (std::size_t i = 0; i < report.ir_top.size(); ++i) {
        ir += csv::join({std::to_string(i + 1), report.ir_top[i].account.str(), format_double(report.ir_top[i].score)}) +
              "\n";
    }
    files.emplace_back("ir_top.csv", std::move(ir));

    std::string moi = "category,rank,account,moi\n";
    for (const auto& c : report.moi_by_category) {
        for (std::size_t i = 0; i < c.entries.size(); ++i) {
            moi += csv::join({c.category, std::to_string(i + 1), c.entries[i].account.str(),
                              format_double(c.entries[i].score)}) +
                   "\n";
        }
    }
    files.emplace_back("moi_by_category.csv", std::move(moi));

    std::string excl = "account,reason\n";
    for (const auto& e : report.exclusions) {
        excl += csv::join({e.account.str(), e.reason}) + "\n";
    }
    files.emplace_back("exclusions.csv", std::move(excl));

    std::string div = "account,ir_rank,moi_rank,rank_gap\n";
    for (const auto& d : report.divergence) {
        div += csv::join({d.account.str(), std::to_string(d.ir_rank), std::to_string(d.moi_rank),
                          std::to_string(d.rank_gap)}) +
               "\n";
    }
    files.emplace_back("divergence.csv", std::move(div));
    return files;
}

namespace {

// Renders rows as left-aligned columns separated by two spaces.
std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += i + 1 == row.size() ? row[i] : fmt::format("{:<{}}  ", row[i], widths[i]);
        }
        out += line + "\n";
    }
    return out;
}

std::string ranked_table(const std::vector<RankedEntry>& entries, const char* score_name) {
    std::vector<std::vector<std::string>> rows{{"rank", "account", score_name}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        rows.push_back({std::to_string(i + 1), entries[i].account.str(), fmt::format("{:.6g}", entries[i].score)});
    }
    return table(rows);
}

} // namespace

std::string export_text(const RankedReport& report) {
    const auto& h = report.generated_for;
    std::string out;
    out += fmt::format("dataset: {}\n", h.dataset);
    out += fmt::format("mode: {}  damping: {}  tol: {}  max_iter: {}  top_k: {}  zero_followers: {}\n", h.mode,
                       format_double(h.damping), format_double(h.tolerance), h.max_iterations, h.top_k,
                       h.zero_follower_policy);
    out += fmt::format("ir: iterations={} converged={} residual={}\n", h.ir_iterations, h.ir_converged ? "yes" : "no",
                       format_double(h.ir_residual));

    out += "\n== Influence Rank (top " + std::to_string(h.top_k) + ") ==\n";
    out += ranked_table(report.ir_top, "ir");

    for (const auto& c : report.moi_by_category) {
        out += "\n== MOI: " + c.category + " ==\n";
        out += ranked_table(c.entries, "moi");
    }

    out += "\n== Exclusions ==\n";
    std::vector<std::vector<std::string>> excl{{"account", "reason"}};
    for (const auto& e : report.exclusions) {
        excl.push_back({e.account.str(), e.reason});
    }
    out += table(excl);

    out += "\n== IR vs MOI divergence ==\n";
    std::vector<std::vector<std::string>> div{{"account", "ir_rank", "moi_rank", "rank_gap"}};
    for (const auto& d : report.divergence) {
        div.push_back({d.account.str(), std::to_string(d.ir_rank), std::to_string(d.moi_rank),
                       fmt::format("{:+d}", d.rank_gap)});
    }
    out += table(div);
    return out;
}

namespace {

std::string dot_id(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string export_dot(const SocialGraph& graph, const RankVector& ranks) {
    std::string out = "graph social {\n";
    for (const auto& id : graph.nodes()) {
        const auto score = ranks.score(id);
        if (!score) {
            throw InfluenceError(ErrorCode::InvalidArgument, id.str(), "rank vector has no entry for '" + id.str() + "'");
        }
        out += fmt::format("  {} [ir=\"{}\"];\n", dot_id(id.str()), format_double(*score));
    }
    for (const auto& [a, b] : graph.edges()) {
        out += fmt::format("  {} -- {};\n", dot_id(a.str()), dot_id(b.str()));
    }
    out += "}\n";
    return out;
}

} // namespace influence
