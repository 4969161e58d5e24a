#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace blocksim {

using BlockId = std::uint32_t;

/// The global blockchain: a rooted tree stored as parent pointers.
///
/// Block 0 is the origin. `parents[k - 1]` is the parent of block k, so
/// `parents` has one entry less than the block count. `producers` is
/// either empty or aligned with `parents`. `times[k]` is the creation
/// time of block k (`times[0] == 0`).
struct BlockTree {
  std::vector<BlockId> parents;
  std::vector<std::uint32_t> producers;
  std::vector<double> times{0.0};

  std::size_t size() const noexcept { return parents.size() + 1; }

  BlockId parent(BlockId k) const { return parents.at(k - 1); }

  /// Appends a block and returns its id.
  BlockId append(BlockId parent, std::uint32_t producer, double time);

  /// Throws std::invalid_argument unless parent[k] < k for every block,
  /// producers is empty or aligned, and times are strictly increasing.
  void check() const;

  friend bool operator==(const BlockTree&, const BlockTree&) = default;
};

/// Heights (node count from the origin, origin = 1) of every block.
std::vector<std::uint32_t> block_heights(const BlockTree& tree);

/// Number of blocks on the longest root-to-leaf path, origin included.
std::uint32_t height(const BlockTree& tree);

/// height / block count.
double proportion_valid(const BlockTree& tree);

/// Tip of the longest branch; ties go to the earliest-created tip.
BlockId longest_tip(const BlockTree& tree);

/// Block ids of the longest branch, origin first.
std::vector<BlockId> longest_branch(const BlockTree& tree);

/// Invalid blocks created between consecutive valid blocks.
///
/// `counts` holds one entry per consecutive valid pair, so its total is
/// (valid blocks - 1). Invalid blocks created after the tip of the longest
/// branch belong to no pair and are reported in `trailing`.
struct GapHistogram {
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t trailing = 0;

  std::uint64_t pairs() const;
  std::uint64_t invalid_in_gaps() const;
  double mean_gap() const;
};

GapHistogram invalid_gap_histogram(const BlockTree& tree);

enum class Regime { slow, fast, chaotic };

inline constexpr double kSlowRatio = 0.01;
inline constexpr double kChaoticRatio = 100.0;

/// slow if beta/alpha < 0.01, chaotic if > 100, fast otherwise.
Regime classify(double alpha_mean, double beta_mean);
std::string_view regime_name(Regime regime);

enum class TreeFormat { dot, json };

TreeFormat parse_tree_format(std::string_view name);

std::string export_tree(const BlockTree& tree, TreeFormat format);

/// Parses the JSON export back into a tree (validated with check()).
BlockTree parse_tree_json(std::string_view text);

}  // namespace blocksim
