#include <algorithm>
#include <cmath>
#include <set>

#include "gmr/builder.hpp"
#include "gmr/random.hpp"

namespace gmr {

std::string to_string(GroupGranularity g) {
  return g == GroupGranularity::EventType ? "event_type" : "semantic_group";
}

std::optional<GroupGranularity> parse_granularity(const std::string& name) {
  if (name == "event_type") return GroupGranularity::EventType;
  if (name == "semantic_group") return GroupGranularity::SemanticGroup;
  return std::nullopt;
}

void SamplingConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
}

std::size_t ratio_floor(double ratio, std::size_t count) {
  const double x = ratio * static_cast<double>(count);
  return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

std::map<std::string, std::size_t> water_fill(const std::map<std::string, std::size_t>& capacities,
                                              std::size_t budget) {
  std::map<std::string, std::size_t> alloc;
  for (const auto& [type, cap] : capacities) alloc[type] = 0;
  while (budget > 0) {
    const std::string* best = nullptr;
    std::size_t best_fill = 0;
    // std::map iterates in ascending id order, so strict < keeps the smallest id on ties.
    for (const auto& [type, cap] : capacities) {
      const auto fill = alloc[type];
      if (fill >= cap) continue;
      if (best == nullptr || fill < best_fill) {
        best = &type;
        best_fill = fill;
      }
    }
    if (best == nullptr) break;
    ++alloc[*best];
    --budget;
  }
  return alloc;
}

namespace {

using IndexSet = std::set<std::size_t>;
using KeyedIndex = std::map<std::string, IndexSet>;

// Selected / unselected negatives of one window, bucketed both ways.
struct WindowState {
  std::size_t positives = 0;
  std::size_t selected_negatives = 0;
  KeyedIndex sel_group, unsel_group, sel_type, unsel_type;
};

double surplus(const WindowState& w, double beta) {
  return static_cast<double>(w.selected_negatives) - beta * static_cast<double>(w.positives);
}

std::optional<std::string> first_common_key(const KeyedIndex& from, const KeyedIndex& to) {
  for (const auto& [key, ids] : from) {
    if (ids.empty()) continue;
    auto it = to.find(key);
    if (it != to.end() && !it->second.empty()) return key;
  }
  return std::nullopt;
}

void move_index(KeyedIndex& from, KeyedIndex& to, const std::string& key, std::size_t idx) {
  from[key].erase(idx);
  to[key].insert(idx);
}

}  // namespace

BalanceResult balance(std::vector<Candidate> candidates, const SamplingConfig& cfg) {
  cfg.validate();
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.sample_id < b.sample_id; });
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].sample_id == candidates[i - 1].sample_id) {
      throw InputError("duplicate candidate sample_id " + candidates[i].sample_id);
    }
  }

  std::map<std::string, std::vector<std::size_t>> singles_by_type;
  std::vector<std::size_t> multi;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    switch (candidates[i].label()) {
      case SampleLabel::Multi: multi.push_back(i); break;
      case SampleLabel::Single: singles_by_type[candidates[i].event_type()].push_back(i); break;
      case SampleLabel::Null: negatives.push_back(i); break;
    }
  }
  std::size_t single_pool = 0;
  for (const auto& [type, ids] : singles_by_type) single_pool += ids.size();
  if (multi.empty() && single_pool == 0) throw InputError("balance: the positive pool is empty");

  Rng rng(cfg.seed);
  BalanceResult result;
  std::vector<bool> selected(candidates.size(), false);

  // Phase 1: all multi-moment positives plus a water-filled single budget.
  for (auto i : multi) selected[i] = true;
  std::map<std::string, std::size_t> capacities;
  for (const auto& [type, ids] : singles_by_type) capacities[type] = ids.size();
  result.single_allocation = water_fill(capacities, ratio_floor(cfg.alpha, multi.size()));
  for (const auto& [type, ids] : singles_by_type) {
    for (auto i : rng.sample(ids, result.single_allocation[type])) selected[i] = true;
  }

  std::map<std::string, std::size_t> positives_by_type, positives_by_group;
  std::size_t positive_total = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!selected[i]) continue;
    ++positives_by_type[candidates[i].event_type()];
    ++positives_by_group[candidates[i].group_key()];
    ++positive_total;
  }

  // Phase 2a: proportional negatives, at group level first when configured.
  auto unselected_negatives = [&](auto&& keep) {
    std::vector<std::size_t> out;
    for (auto i : negatives) {
      if (!selected[i] && keep(candidates[i])) out.push_back(i);
    }
    return out;
  };
  std::map<std::string, std::size_t> selected_neg_by_type;
  auto select_negatives = [&](const std::vector<std::size_t>& pool, std::size_t count) {
    for (auto i : rng.sample(pool, count)) {
      selected[i] = true;
      ++selected_neg_by_type[candidates[i].event_type()];
    }
  };

  if (cfg.granularity == GroupGranularity::SemanticGroup) {
    for (const auto& [group, n_pos] : positives_by_group) {
      auto pool = unselected_negatives([&](const Candidate& c) { return c.group_key() == group; });
      select_negatives(pool, std::min(ratio_floor(cfg.beta, n_pos), pool.size()));
    }
  }
  for (const auto& [type, n_pos] : positives_by_type) {
    const auto target = ratio_floor(cfg.beta, n_pos);
    const auto have = selected_neg_by_type[type];
    if (have >= target) continue;
    auto pool = unselected_negatives([&](const Candidate& c) { return c.event_type() == type; });
    select_negatives(pool, std::min(target - have, pool.size()));
  }
  {
    const auto target = ratio_floor(cfg.beta, positive_total);
    std::size_t have = 0;
    for (const auto& [type, n] : selected_neg_by_type) have += n;
    if (have < target) {
      auto pool = unselected_negatives([](const Candidate&) { return true; });
      select_negatives(pool, std::min(target - have, pool.size()));
    }
  }
  for (auto i : negatives) {
    if (selected[i]) result.phase2a_negatives.push_back(candidates[i].sample_id);
  }

  // Phase 2b: cross-window swaps that keep every type's global negative count.
  std::map<std::string, WindowState> windows;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    auto& w = windows[c.clip_id];
    if (c.label() != SampleLabel::Null) {
      if (selected[i]) ++w.positives;
      continue;
    }
    if (selected[i]) {
      ++w.selected_negatives;
      w.sel_group[c.group_key()].insert(i);
      w.sel_type[c.event_type()].insert(i);
    } else {
      w.unsel_group[c.group_key()].insert(i);
      w.unsel_type[c.event_type()].insert(i);
    }
  }

  std::size_t swaps = 0;
  bool swap_budget_hit = cfg.max_swaps == 0;
  for (std::size_t round = 1; round <= cfg.max_rounds && !swap_budget_hit; ++round) {
    std::vector<std::string> surplus_ids, deficit_ids;
    for (const auto& [id, w] : windows) {
      const double s = surplus(w, cfg.beta);
      if (s > 0.0) surplus_ids.push_back(id);
      if (s < 0.0) deficit_ids.push_back(id);
    }
    if (surplus_ids.empty() || deficit_ids.empty()) break;
    // Ties keep the lexicographic window order (stable sort over sorted ids).
    std::stable_sort(surplus_ids.begin(), surplus_ids.end(), [&](const auto& a, const auto& b) {
      return surplus(windows[a], cfg.beta) > surplus(windows[b], cfg.beta);
    });
    std::stable_sort(deficit_ids.begin(), deficit_ids.end(), [&](const auto& a, const auto& b) {
      return surplus(windows[a], cfg.beta) < surplus(windows[b], cfg.beta);
    });

    bool progress = false;
    for (const auto& d_id : surplus_ids) {
      auto& d = windows[d_id];
      for (const auto& v_id : deficit_ids) {
        if (swaps >= cfg.max_swaps) {
          swap_budget_hit = true;
          break;
        }
        if (!(surplus(d, cfg.beta) > 0.0)) break;
        auto& v = windows[v_id];
        if (!(surplus(v, cfg.beta) < 0.0)) continue;

        bool group_level = false;
        std::optional<std::string> key;
        if (cfg.granularity == GroupGranularity::SemanticGroup) {
          key = first_common_key(d.sel_group, v.unsel_group);
          group_level = key.has_value();
        }
        std::size_t give = 0, take = 0;
        if (group_level) {
          give = *d.sel_group[*key].begin();
          take = *v.unsel_group[*key].begin();
        } else {
          key = first_common_key(d.sel_type, v.unsel_type);
          if (!key) continue;
          give = *d.sel_type[*key].begin();
          take = *v.unsel_type[*key].begin();
        }
        const auto& g = candidates[give];
        const auto& t = candidates[take];
        move_index(d.sel_group, d.unsel_group, g.group_key(), give);
        move_index(d.sel_type, d.unsel_type, g.event_type(), give);
        move_index(v.unsel_group, v.sel_group, t.group_key(), take);
        move_index(v.unsel_type, v.sel_type, t.event_type(), take);
        --d.selected_negatives;
        ++v.selected_negatives;
        selected[give] = false;
        selected[take] = true;
        ++swaps;
        progress = true;
        result.swaps.push_back({round, d_id, v_id, *key, group_level});
      }
      if (swap_budget_hit) break;
    }
    if (!progress) break;
  }

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!selected[i]) continue;
    switch (candidates[i].label()) {
      case SampleLabel::Multi: ++result.multi; break;
      case SampleLabel::Single: ++result.singles; break;
      case SampleLabel::Null: ++result.negatives; break;
    }
    result.selected.push_back(candidates[i]);
  }
  return result;
}

}  // namespace gmr
