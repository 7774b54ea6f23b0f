#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "influence/engagement.hpp"
#include "influence/graph.hpp"
#include "influence/ingest.hpp"

namespace influence {

enum class ZeroFollowerPolicy { Fail, Skip };

std::string_view to_string(ZeroFollowerPolicy policy);
ZeroFollowerPolicy parse_zero_follower_policy(std::string_view text);

struct ReportConfig {
    static constexpr std::size_t kDefaultTopK = 5;

    EngagementMode mode = EngagementMode::Strict;
    RankConfig rank;
    std::size_t top_k = kDefaultTopK;
    /// Fail aborts on NoPosts and ZeroFollowers; Skip records the account as
    /// an exclusion.
    ZeroFollowerPolicy zero_followers = ZeroFollowerPolicy::Fail;
};

struct RankedEntry {
    AccountId account;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct CategoryRanking {
    std::string category;
    std::vector<RankedEntry> entries;

    friend bool operator==(const CategoryRanking&, const CategoryRanking&) = default;
};

struct Exclusion {
    AccountId account;
    std::string reason;

    friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

/// One account's position under both metrics; rank_gap = moi_rank - ir_rank.
/// Ranks are 1-based and taken over the ranked (non-excluded) accounts only.
struct DivergenceRow {
    AccountId account;
    std::size_t ir_rank = 0;
    std::size_t moi_rank = 0;
    long long rank_gap = 0;

    friend bool operator==(const DivergenceRow&, const DivergenceRow&) = default;
};

struct ReportHeader {
    std::string dataset;
    std::string mode;
    double damping = 0.0;
    double tolerance = 0.0;
    std::size_t max_iterations = 0;
    std::size_t top_k = 0;
    std::string zero_follower_policy;
    std::size_t ir_iterations = 0;
    bool ir_converged = false;
    double ir_residual = 0.0;

    friend bool operator==(const ReportHeader&, const ReportHeader&) = default;
};

struct RankedReport {
    ReportHeader generated_for;
    std::vector<RankedEntry> ir_top;
    /// Taxonomy order.
    std::vector<CategoryRanking> moi_by_category;
    std::vector<Exclusion> exclusions;
    /// Descending |rank_gap|, ascending id on ties.
    std::vector<DivergenceRow> divergence;

    friend bool operator==(const RankedReport&, const RankedReport&) = default;
};

/// Per-account MOI with the configured failure policy applied.
struct MoiTable {
    /// Ascending account id.
    std::vector<MoiResult> results;
    std::vector<Exclusion> exclusions;
};

/// Throws InfluenceError from `moi` under the Fail policy.
MoiTable compute_moi_table(const Dataset& dataset, EngagementMode mode, ZeroFollowerPolicy policy);

/// Descending score, ascending id on ties.
void sort_ranked(std::vector<RankedEntry>& entries);

/// Full pipeline: IR over the graph, MOI per account, grouping, divergence.
/// `ranks` receives the complete rank vector when non-null.
RankedReport build_report(const Dataset& dataset, const ReportConfig& config, RankVector* ranks = nullptr,
                          MoiTable* moi_table = nullptr);

/// Canonical JSON document: sorted keys, two-space indent, trailing newline.
std::string export_json(const RankedReport& report);
RankedReport report_from_json(std::string_view text);

/// One CSV document per section, in a fixed order:
/// metadata.csv, ir_top.csv, moi_by_category.csv, exclusions.csv, divergence.csv.
std::vector<std::pair<std::string, std::string>> export_csv(const RankedReport& report);

/// Aligned-column human-readable rendering.
std::string export_text(const RankedReport& report);

/// Undirected DOT graph with an `ir` attribute per node. Nodes appear in
/// ascending id order, edges in ascending (min, max) order.
std::string export_dot(const SocialGraph& graph, const RankVector& ranks);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

} // namespace influence
