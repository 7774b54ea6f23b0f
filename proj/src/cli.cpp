#include "influence/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <system_error>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <unistd.h>

namespace influence::cli {

namespace {

using nlohmann::json;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

class Log {
public:
    Log(std::ostream& err) : err_(err) {
        const char* env = std::getenv("INFLUENCE_LOG");
        const std::string_view v = env != nullptr ? env : "warn";
        if (v == "error") level_ = LogLevel::Error;
        else if (v == "info") level_ = LogLevel::Info;
        else if (v == "debug") level_ = LogLevel::Debug;
    }

    void error(const std::string& msg) const { emit(LogLevel::Error, "error", msg); }
    void warn(const std::string& msg) const { emit(LogLevel::Warn, "warning", msg); }
    void info(const std::string& msg) const { emit(LogLevel::Info, "info", msg); }

private:
    void emit(LogLevel level, std::string_view tag, const std::string& msg) const {
        if (level <= level_) {
            err_ << tag << ": " << msg << '\n';
        }
    }

    std::ostream& err_;
    LogLevel level_ = LogLevel::Warn;
};

OutputFormat parse_format(std::string_view s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "dot") return OutputFormat::Dot;
    return OutputFormat::Text;
}

bool to_stdout(const RunConfig& config) {
    return config.output.empty() || config.output == "-";
}

void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
    if (to_stdout(config)) {
        out << content;
    } else {
        write_atomically(config.output, content);
    }
}

// CSV sections go to a directory when an output path is given, otherwise
// they are concatenated on stdout under "# <name>" markers.
void emit_sections(const RunConfig& config, const std::vector<std::pair<std::string, std::string>>& sections,
                   std::ostream& out) {
    if (to_stdout(config)) {
        for (std::size_t i = 0; i < sections.size(); ++i) {
            out << (i == 0 ? "" : "\n") << "# " << sections[i].first << '\n' << sections[i].second;
        }
        return;
    }
    const std::filesystem::path dir(config.output);
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : sections) {
        write_atomically(dir / name, content);
    }
}

// Loads the dataset and reports problems. Returns the exit code to use when
// loading failed.
std::optional<int> load(const RunConfig& config, const Log& log, std::optional<Dataset>& dataset) {
    auto result = load_dataset(config.paths);
    for (const auto& w : result.report.warnings) {
        log.warn(format_diagnostic(w, "warning"));
    }
    for (const auto& e : result.report.errors) {
        log.error(format_diagnostic(e, "error"));
    }
    if (result.report.has_io_error()) {
        return kUsageOrIo;
    }
    if (!result.dataset) {
        return kDataError;
    }
    dataset = std::move(result.dataset);
    return std::nullopt;
}

std::vector<std::string> table_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    std::vector<std::string> lines;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += i + 1 == row.size() ? row[i] : fmt::format("{:<{}}  ", row[i], widths[i]);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& line : table_rows(rows)) {
        out += line + "\n";
    }
    return out;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
    const auto result = load_dataset(config.paths);
    const auto& report = result.report;
    std::string content;
    if (config.format == OutputFormat::Json) {
        auto diags = [](const std::vector<Diagnostic>& list) {
            json arr = json::array();
            for (const auto& d : list) {
                arr.push_back({{"file", d.file}, {"line", d.line}, {"code", d.code}, {"message", d.message}});
            }
            return arr;
        };
        json doc = {{"valid", report.ok()},
                    {"record_counts", report.record_counts},
                    {"errors", diags(report.errors)},
                    {"warnings", diags(report.warnings)}};
        if (result.dataset) {
            doc["taxonomy"] = result.dataset->taxonomy;
        }
        content = doc.dump(2) + "\n";
    } else {
        for (const auto& [file, count] : report.record_counts) {
            content += fmt::format("{}: {} records\n", file, count);
        }
        if (result.dataset) {
            const auto& d = *result.dataset;
            content += fmt::format("accounts: {}  edges: {}  posts: {}  categories: {}\n", d.profiles.size(),
                                   d.graph.edge_count(), d.post_count(), d.taxonomy.size());
        }
        content += fmt::format("errors: {}  warnings: {}\n", report.errors.size(), report.warnings.size());
        for (const auto& e : report.errors) {
            content += format_diagnostic(e, "error") + "\n";
        }
        for (const auto& w : report.warnings) {
            content += format_diagnostic(w, "warning") + "\n";
        }
    }
    emit(config, content, out);
    if (report.has_io_error()) {
        return kUsageOrIo;
    }
    return report.ok() ? kSuccess : kDataError;
}

void log_rank_status(const RankVector& ranks, const Log& log) {
    const auto msg = fmt::format("influence rank: iterations={} converged={} residual={}", ranks.iterations,
                                 ranks.converged ? "yes" : "no", format_double(ranks.residual));
    if (ranks.converged) {
        log.info(msg);
    } else {
        log.warn(msg + " (iteration cap reached)");
    }
}

int cmd_ir(const RunConfig& config, std::ostream& out, const Log& log) {
    std::optional<Dataset> dataset;
    if (const auto code = load(config, log, dataset)) {
        return *code;
    }
    const auto ranks = influence_rank(dataset->graph, config.report.rank);
    const auto top = top_k_by_rank(ranks, config.report.top_k);
    log_rank_status(ranks, log);

    switch (config.format) {
    case OutputFormat::Json: {
        json rows = json::array();
        for (std::size_t i = 0; i < top.size(); ++i) {
            rows.push_back({{"rank", i + 1}, {"account", top[i].first.str()}, {"ir", top[i].second}});
        }
        json doc = {{"damping", config.report.rank.damping},
                    {"tolerance", config.report.rank.tolerance},
                    {"max_iterations", config.report.rank.max_iterations},
                    {"iterations", ranks.iterations},
                    {"converged", ranks.converged},
                    {"residual", ranks.residual},
                    {"ir_top", std::move(rows)}};
        emit(config, doc.dump(2) + "\n", out);
        break;
    }
    case OutputFormat::Csv: {
        std::string content = "rank,account,ir\n";
        for (std::size_t i = 0; i < top.size(); ++i) {
            content += fmt::format("{},{},{}\n", i + 1, top[i].first.str(), format_double(top[i].second));
        }
        emit(config, content, out);
        break;
    }
    case OutputFormat::Dot:
        emit(config, export_dot(dataset->graph, ranks), out);
        break;
    case OutputFormat::Text: {
        std::string content = fmt::format("# influence rank  damping={}  tol={}  iterations={}  converged={}  residual={}\n",
                                          format_double(config.report.rank.damping),
                                          format_double(config.report.rank.tolerance), ranks.iterations,
                                          ranks.converged ? "yes" : "no", format_double(ranks.residual));
        std::vector<std::vector<std::string>> rows{{"rank", "account", "handle", "ir"}};
        for (std::size_t i = 0; i < top.size(); ++i) {
            rows.push_back({std::to_string(i + 1), top[i].first.str(), dataset->profiles.at(top[i].first).handle,
                            fmt::format("{:.6f}", top[i].second)});
        }
        emit(config, content + render_table(rows), out);
        break;
    }
    }
    return ranks.converged ? kSuccess : kNotConverged;
}

void log_data_quality(const MoiTable& table, const Log& log) {
    for (const auto& result : table.results) {
        for (const auto& post : result.over_follower_posts) {
            log.warn(fmt::format("account '{}': post '{}' has more distinct engagers than followers",
                                 result.account.str(), post));
        }
    }
    for (const auto& e : table.exclusions) {
        log.warn(fmt::format("account '{}' excluded from rankings: {}", e.account.str(), e.reason));
    }
}

int cmd_moi(const RunConfig& config, std::ostream& out, const Log& log) {
    std::optional<Dataset> dataset;
    if (const auto code = load(config, log, dataset)) {
        return *code;
    }
    MoiTable table;
    RankedReport report;
    try {
        report = build_report(*dataset, config.report, nullptr, &table);
    } catch (const InfluenceError& e) {
        log.error(fmt::format("{}: {}", to_string(e.code()), e.what()));
        return kDataError;
    }
    log_data_quality(table, log);

    std::map<AccountId, std::size_t> post_counts;
    for (const auto& r : table.results) {
        post_counts[r.account] = r.post_count;
    }
    const auto mode = to_string(config.report.mode);

    switch (config.format) {
    case OutputFormat::Json: {
        json categories = json::array();
        for (const auto& c : report.moi_by_category) {
            json ranking = json::array();
            for (std::size_t i = 0; i < c.entries.size(); ++i) {
                ranking.push_back({{"rank", i + 1},
                                   {"account", c.entries[i].account.str()},
                                   {"moi", c.entries[i].score},
                                   {"post_count", post_counts.at(c.entries[i].account)}});
            }
            categories.push_back({{"category", c.category}, {"ranking", std::move(ranking)}});
        }
        json exclusions = json::array();
        for (const auto& e : report.exclusions) {
            exclusions.push_back({{"account", e.account.str()}, {"reason", e.reason}});
        }
        json doc = {{"mode", mode}, {"moi_by_category", std::move(categories)}, {"exclusions", std::move(exclusions)}};
        emit(config, doc.dump(2) + "\n", out);
        break;
    }
    case OutputFormat::Csv: {
        std::string content = "category,rank,account,moi,post_count\n";
        for (const auto& c : report.moi_by_category) {
            for (std::size_t i = 0; i < c.entries.size(); ++i) {
                const auto& e = c.entries[i];
                content += fmt::format("{},{},{},{},{}\n", c.category, i + 1, e.account.str(), format_double(e.score),
                                       post_counts.at(e.account));
            }
        }
        emit(config, content, out);
        break;
    }
    case OutputFormat::Dot: // rejected before dispatch
    case OutputFormat::Text: {
        std::string content = fmt::format("# magnitude of influence  mode={}\n", mode);
        for (const auto& c : report.moi_by_category) {
            content += fmt::format("\n== {} ==\n", c.category);
            std::vector<std::vector<std::string>> rows{{"rank", "account", "handle", "posts", "moi"}};
            for (std::size_t i = 0; i < c.entries.size(); ++i) {
                const auto& e = c.entries[i];
                rows.push_back({std::to_string(i + 1), e.account.str(), dataset->profiles.at(e.account).handle,
                                std::to_string(post_counts.at(e.account)), fmt::format("{:.6g}", e.score)});
            }
            content += render_table(rows);
        }
        content += "\n== exclusions ==\n";
        std::vector<std::vector<std::string>> rows{{"account", "reason"}};
        for (const auto& e : report.exclusions) {
            rows.push_back({e.account.str(), e.reason});
        }
        content += render_table(rows);
        emit(config, content, out);
        break;
    }
    }
    return kSuccess;
}

int cmd_report(const RunConfig& config, std::ostream& out, const Log& log) {
    std::optional<Dataset> dataset;
    if (const auto code = load(config, log, dataset)) {
        return *code;
    }
    RankVector ranks;
    MoiTable table;
    RankedReport report;
    try {
        report = build_report(*dataset, config.report, &ranks, &table);
    } catch (const InfluenceError& e) {
        log.error(fmt::format("{}: {}", to_string(e.code()), e.what()));
        return kDataError;
    }
    log_rank_status(ranks, log);
    log_data_quality(table, log);

    switch (config.format) {
    case OutputFormat::Json: emit(config, export_json(report), out); break;
    case OutputFormat::Csv: emit_sections(config, export_csv(report), out); break;
    case OutputFormat::Dot: emit(config, export_dot(dataset->graph, ranks), out); break;
    case OutputFormat::Text: emit(config, export_text(report), out); break;
    }
    return ranks.converged ? kSuccess : kNotConverged;
}

} // namespace

std::string_view to_string(OutputFormat format) {
    switch (format) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Dot: return "dot";
    }
    return "text";
}

void write_atomically(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += fmt::format(".tmp.{}", ::getpid());
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw std::filesystem::filesystem_error("cannot open for writing", tmp,
                                                    std::make_error_code(std::errc::io_error));
        }
        file.write(content.data(), static_cast<std::streamsize>(content.size()));
        file.flush();
        if (!file) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::filesystem::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
        }
    }
    std::filesystem::rename(tmp, path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Log log(err);

    CLI::App app{"Social influence metrics over an account graph: Influence Rank (PageRank) and\n"
                 "Magnitude of Influence (RMS of per-post Ratio of Affection), ranked per category.",
                 "influence"};
    app.option_defaults()->always_capture_default();
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI file with the same keys; flags override");

    std::string data_dir;
    std::string accounts;
    std::string edges;
    std::string posts;
    std::string mode = "strict";
    double damping = RankConfig::kDefaultDamping;
    double tol = RankConfig::kDefaultTolerance;
    std::size_t max_iter = RankConfig::kDefaultMaxIterations;
    std::size_t top = ReportConfig::kDefaultTopK;
    std::string zero_followers = "fail";
    std::string output;
    std::string format = "text";

    app.add_option("--data", data_dir, "Directory holding accounts.csv, edges.csv and posts.jsonl");
    app.add_option("--accounts", accounts, "Accounts CSV (id,handle,category,follower_count)");
    app.add_option("--edges", edges, "Friendship edges CSV (src,dst)");
    app.add_option("--posts", posts, "Posts JSON-lines file");
    app.add_option("--mode", mode, "Engagement mode for ROA/MOI")->check(CLI::IsMember({"strict", "raw"}));
    app.add_option("--damping", damping, "PageRank damping factor; 1.0 is the undamped recurrence")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--tol", tol, "L1 convergence tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--top", top, "Number of accounts in the IR table")->check(CLI::PositiveNumber);
    app.add_option("--zero-followers", zero_followers,
                   "Accounts with zero followers or no posts: fail the run, or skip and list as exclusions")
        ->check(CLI::IsMember({"fail", "skip"}));
    app.add_option("-o,--output", output, "Output file (csv report: directory); '-' for stdout");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv", "dot"}));

    auto* validate = app.add_subcommand("validate", "Load and validate the input files");
    auto* ir = app.add_subcommand("ir", "Influence Rank table (top accounts by PageRank)");
    auto* moi_cmd = app.add_subcommand("moi", "Per-category Magnitude of Influence tables");
    auto* report = app.add_subcommand("report", "Full ranked report: IR, MOI per category, exclusions, divergence");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "Run 'influence --help' for usage.\n";
        return kUsageOrIo;
    }

    RunConfig config;
    if (!data_dir.empty()) {
        config.paths = DatasetPaths::in_directory(data_dir);
    }
    if (!accounts.empty()) config.paths.accounts = accounts;
    if (!edges.empty()) config.paths.edges = edges;
    if (!posts.empty()) config.paths.posts = posts;
    if (config.paths.accounts.empty() || config.paths.edges.empty() || config.paths.posts.empty()) {
        err << "error: input files not given; pass --data DIR or all of --accounts, --edges, --posts\n"
            << "Run 'influence --help' for usage.\n";
        return kUsageOrIo;
    }
    config.report.mode = parse_engagement_mode(mode);
    config.report.rank = {damping, tol, max_iter};
    config.report.top_k = top;
    config.report.zero_followers = parse_zero_follower_policy(zero_followers);
    config.output = output;
    config.format = parse_format(format);

    const bool format_ok = (validate->parsed() && (config.format == OutputFormat::Text || config.format == OutputFormat::Json)) ||
                           (moi_cmd->parsed() && config.format != OutputFormat::Dot) || ir->parsed() || report->parsed();
    if (!format_ok) {
        err << "error: --format " << format << " is not available for this command\n";
        return kUsageOrIo;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(config, out);
        }
        if (ir->parsed()) {
            return cmd_ir(config, out, log);
        }
        if (moi_cmd->parsed()) {
            return cmd_moi(config, out, log);
        }
        if (report->parsed()) {
            return cmd_report(config, out, log);
        }
    } catch (const std::filesystem::filesystem_error& e) {
        log.error(e.what());
        return kUsageOrIo;
    } catch (const InfluenceError& e) {
        log.error(fmt::format("{}: {}", to_string(e.code()), e.what()));
        return kDataError;
    }
    return kUsageOrIo;
}

} // namespace influence::cli
