#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "influence/graph.hpp"

namespace influence {

/// One tweet and the users who engaged with it. The engagement sets never
/// contain the author.
struct Post {
    std::string post_id;
    AccountId author;
    std::set<AccountId> likers;
    std::set<AccountId> mentioners;
    std::set<AccountId> retweeters;

    friend bool operator==(const Post&, const Post&) = default;
};

struct AccountProfile {
    AccountId id;
    std::string handle;
    std::string category;
    std::uint64_t follower_count = 0;

    friend bool operator==(const AccountProfile&, const AccountProfile&) = default;
};

/// How per-post engagement is turned into a ratio.
///
/// strict: distinct engaging users over followers, as the binary indicator
///         formulation reads; bounded by 1 on clean data.
/// raw:    likes + mentions + retweets counted separately, times 100, over
///         followers; an engagement rate in percent.
enum class EngagementMode { Strict, Raw };

std::string_view to_string(EngagementMode mode);
/// Accepts "strict" or "raw"; throws InfluenceError(InvalidArgument) otherwise.
EngagementMode parse_engagement_mode(std::string_view text);

struct MoiResult {
    AccountId account;
    double moi = 0.0;
    /// Ascending post_id order.
    std::vector<std::pair<std::string, double>> roa_per_post;
    std::size_t post_count = 0;
    /// Strict mode only: posts whose distinct engagers outnumber the followers.
    std::vector<std::string> over_follower_posts;

    friend bool operator==(const MoiResult&, const MoiResult&) = default;
};

/// 1 when `user` liked, mentioned or retweeted `post`, else 0.
int lcrt(const AccountId& user, const Post& post);

/// Number of distinct users across the three engagement sets.
std::size_t distinct_engagers(const Post& post);

/// True in strict mode when distinct engagers exceed the follower count.
/// Such a ratio exceeds 1; it is reported, not clamped.
bool exceeds_followers(const Post& post, const AccountProfile& profile);

/// Ratio of Affection of one post. Throws InfluenceError with ZeroFollowers
/// when the author has no followers, AuthorMismatch when the post is not by
/// `profile`.
double roa(const Post& post, const AccountProfile& profile, EngagementMode mode);

/// Magnitude of Influence: root mean square of the per-post ROA values.
/// Squares are summed in ascending value order, so the result depends only
/// on the multiset of ROA values, not on post order or post ids.
/// Throws InfluenceError with NoPosts, ZeroFollowers or AuthorMismatch.
MoiResult moi(const AccountProfile& profile, const std::vector<Post>& posts, EngagementMode mode);

} // namespace influence
