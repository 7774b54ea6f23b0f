#include "influence/engagement.hpp"

#include <algorithm>
#include <cmath>

namespace influence {

std::string_view to_string(EngagementMode mode) {
    return mode == EngagementMode::Strict ? "strict" : "raw";
}

EngagementMode parse_engagement_mode(std::string_view text) {
    if (text == "strict") {
        return EngagementMode::Strict;
    }
    if (text == "raw") {
        return EngagementMode::Raw;
    }
    throw InfluenceError(ErrorCode::InvalidArgument, std::string(text),
                         "engagement mode must be 'strict' or 'raw', got '" + std::string(text) + "'");
}

int lcrt(const AccountId& user, const Post& post) {
    return post.likers.contains(user) || post.mentioners.contains(user) || post.retweeters.contains(user) ? 1 : 0;
}

std::size_t distinct_engagers(const Post& post) {
    std::set<AccountId> all = post.likers;
    all.insert(post.mentioners.begin(), post.mentioners.end());
    all.insert(post.retweeters.begin(), post.retweeters.end());
    return all.size();
}

bool exceeds_followers(const Post& post, const AccountProfile& profile) {
    return distinct_engagers(post) > profile.follower_count;
}

double roa(const Post& post, const AccountProfile& profile, EngagementMode mode) {
    if (post.author != profile.id) {
        throw InfluenceError(ErrorCode::AuthorMismatch, post.post_id,
                             "post '" + post.post_id + "' is authored by '" + post.author.str() + "', not '" +
                                 profile.id.str() + "'");
    }
    if (profile.follower_count == 0) {
        throw InfluenceError(ErrorCode::ZeroFollowers, profile.id.str(),
                             "account '" + profile.id.str() + "' has zero followers; ROA is undefined");
    }
    const auto followers = static_cast<double>(profile.follower_count);
    if (mode == EngagementMode::Strict) {
        return static_cast<double>(distinct_engagers(post)) / followers;
    }
    const auto interactions = post.likers.size() + post.mentioners.size() + post.retweeters.size();
    return static_cast<double>(interactions) * 100.0 / followers;
}

MoiResult moi(const AccountProfile& profile, const std::vector<Post>& posts, EngagementMode mode) {
    if (posts.empty()) {
        throw InfluenceError(ErrorCode::NoPosts, profile.id.str(),
                             "account '" + profile.id.str() + "' has no posts; MOI is undefined");
    }

    std::vector<const Post*> ordered;
    ordered.reserve(posts.size());
    for (const auto& p : posts) {
        ordered.push_back(&p);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Post* a, const Post* b) { return a->post_id < b->post_id; });

    MoiResult result;
    result.account = profile.id;
    result.post_count = posts.size();
    result.roa_per_post.reserve(posts.size());

    std::vector<double> squares;
    squares.reserve(posts.size());
    for (const Post* p : ordered) {
        const double r = roa(*p, profile, mode);
        result.roa_per_post.emplace_back(p->post_id, r);
        squares.push_back(r * r);
        if (mode == EngagementMode::Strict && exceeds_followers(*p, profile)) {
            result.over_follower_posts.push_back(p->post_id);
        }
    }
    // Summing in ascending value order makes the result independent of both
    // post order and post ids.
    std::sort(squares.begin(), squares.end());
    double sum_sq = 0.0;
    for (const double sq : squares) {
        sum_sq += sq;
    }
    const auto [lo, hi] = std::minmax_element(result.roa_per_post.begin(), result.roa_per_post.end(),
                                              [](const auto& a, const auto& b) { return a.second < b.second; });
    // Rounding can push the root mean square an ulp outside [min, max].
    result.moi = std::clamp(std::sqrt(sum_sq / static_cast<double>(posts.size())), lo->second, hi->second);
    return result;
}

} // namespace influence
