#include "blocksim/blocktree.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "blocksim/distributions.hpp"

namespace blocksim {

BlockId BlockTree::append(BlockId parent, std::uint32_t producer, double time) {
  parents.push_back(parent);
  producers.push_back(producer);
  times.push_back(time);
  return static_cast<BlockId>(parents.size());
}

void BlockTree::check() const {
  if (times.size() != size()) throw std::invalid_argument("times must cover every block");
  if (!producers.empty() && producers.size() != parents.size()) {
    throw std::invalid_argument("producers must be empty or cover blocks 1..n-1");
  }
  for (std::size_t k = 1; k < size(); ++k) {
    if (parents[k - 1] >= k) throw std::invalid_argument("parent[k] must be < k");
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("creation times must be strictly increasing");
    }
  }
}

std::vector<std::uint32_t> block_heights(const BlockTree& tree) {
  std::vector<std::uint32_t> h(tree.size());
  h[0] = 1;
  for (std::size_t k = 1; k < tree.size(); ++k) h[k] = h[tree.parents[k - 1]] + 1;
  return h;
}

std::uint32_t height(const BlockTree& tree) {
  auto h = block_heights(tree);
  return *std::max_element(h.begin(), h.end());
}

double proportion_valid(const BlockTree& tree) {
  return static_cast<double>(height(tree)) / static_cast<double>(tree.size());
}

BlockId longest_tip(const BlockTree& tree) {
  auto h = block_heights(tree);
  // max_element returns the first maximum, i.e. the earliest tip.
  return static_cast<BlockId>(std::max_element(h.begin(), h.end()) - h.begin());
}

std::vector<BlockId> longest_branch(const BlockTree& tree) {
  std::vector<BlockId> branch;
  for (BlockId b = longest_tip(tree);; b = tree.parent(b)) {
    branch.push_back(b);
    if (b == 0) break;
  }
  std::reverse(branch.begin(), branch.end());
  return branch;
}

std::uint64_t GapHistogram::pairs() const {
  std::uint64_t total = 0;
  for (const auto& [gap, count] : counts) total += count;
  return total;
}

std::uint64_t GapHistogram::invalid_in_gaps() const {
  std::uint64_t total = 0;
  for (const auto& [gap, count] : counts) total += gap * count;
  return total;
}

double GapHistogram::mean_gap() const {
  auto n = pairs();
  return n == 0 ? 0.0 : static_cast<double>(invalid_in_gaps()) / static_cast<double>(n);
}

GapHistogram invalid_gap_histogram(const BlockTree& tree) {
  GapHistogram hist;
  auto branch = longest_branch(tree);
  // Branch ids increase strictly, so every id strictly between two
  // consecutive valid blocks is an invalid block.
  for (std::size_t i = 1; i < branch.size(); ++i) {
    ++hist.counts[branch[i] - branch[i - 1] - 1];
  }
  hist.trailing = tree.size() - 1 - branch.back();
  return hist;
}

Regime classify(double alpha_mean, double beta_mean) {
  if (!(alpha_mean > 0.0) || beta_mean < 0.0) {
    throw ConfigError("classify needs alpha_mean > 0 and beta_mean >= 0");
  }
  const double ratio = beta_mean / alpha_mean;
  if (ratio < kSlowRatio) return Regime::slow;
  if (ratio > kChaoticRatio) return Regime::chaotic;
  return Regime::fast;
}

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::slow: return "slow";
    case Regime::fast: return "fast";
    case Regime::chaotic: return "chaotic";
  }
  return "?";
}

TreeFormat parse_tree_format(std::string_view name) {
  if (name == "dot") return TreeFormat::dot;
  if (name == "json") return TreeFormat::json;
  throw ConfigError("unsupported tree format '" + std::string(name) + "' (dot, json)");
}

std::string export_tree(const BlockTree& tree, TreeFormat format) {
  if (format == TreeFormat::json) {
    nlohmann::json doc;
    doc["parents"] = tree.parents;
    doc["producers"] = tree.producers;
    auto& times = doc["times"] = nlohmann::json::array();
    for (double t : tree.times) {
      // Integral times print as integers ("0", not "0.0").
      if (t == std::trunc(t) && std::abs(t) < 0x1.0p53) {
        times.push_back(static_cast<std::int64_t>(t));
      } else {
        times.push_back(t);
      }
    }
    return doc.dump();
  }
  std::ostringstream out;
  out << "digraph blocktree {\n  0;\n";
  for (std::size_t k = 1; k < tree.size(); ++k) {
    out << "  " << k << " -> " << tree.parents[k - 1] << ";\n";
  }
  out << "}\n";
  return out.str();
}

BlockTree parse_tree_json(std::string_view text) {
  BlockTree tree;
  try {
    auto doc = nlohmann::json::parse(text);
    tree.parents = doc.at("parents").get<std::vector<BlockId>>();
    tree.producers = doc.value("producers", std::vector<std::uint32_t>{});
    tree.times = doc.at("times").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tree JSON: ") + e.what());
  }
  tree.check();
  return tree;
}

}  // namespace blocksim
