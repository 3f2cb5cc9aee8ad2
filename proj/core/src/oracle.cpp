#include "unidemand/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "unidemand/errors.hpp"
#include "unidemand/random.hpp"

namespace unidemand {
namespace {

using Key = std::pair<Rational, Rational>;  // (value, price)

struct Winning {
  std::map<Key, Rational> cells;
  Rational nobody = 1;
};

void check_inputs(const Instance& instance, const PriceVector& prices) {
  instance.validate();
  if (prices.size() != instance.size()) {
    throw DomainError("price vector has " + std::to_string(prices.size()) + " entries for " +
                      std::to_string(instance.size()) + " items");
  }
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (!is_discrete(instance.items[i])) {
      throw UnsupportedInputError("exact evaluation needs discrete items (item " +
                                  std::to_string(i) + " is an oracle)");
    }
  }
}

Winning add_item(const Winning& current, const DiscreteDistribution& item, const Price& price,
                 TieBreak tie_break) {
  if (price.is_infinite()) return current;
  const Rational& p = price.value();
  const bool new_wins_ties = tie_break == TieBreak::HighestIndex;
  Winning next;
  next.nobody = 0;
  for (std::size_t k = 0; k < item.size(); ++k) {
    const Rational& mass = item.masses()[k];
    if (mass == 0) continue;
    const Rational& v = item.support()[k];
    const Rational gap = v - p;
    // Nobody yet: the new item takes it.
    if (current.nobody != 0) next.cells[{v, p}] += current.nobody * mass;
    for (const auto& [key, probability] : current.cells) {
      const Rational old_gap = key.first - key.second;
      const bool takes = new_wins_ties ? gap >= old_gap : gap > old_gap;
      next.cells[takes ? Key{v, p} : key] += probability * mass;
    }
  }
  return next;
}

}  // namespace

ExactWinning exact_winning(const Instance& instance, const PriceVector& prices,
                           TieBreak tie_break) {
  check_inputs(instance, prices);
  Winning w;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    w = add_item(w, std::get<DiscreteDistribution>(instance.items[i]), prices[i], tie_break);
  }
  ExactWinning out;
  out.nobody = w.nobody;
  for (auto& [key, probability] : w.cells) {
    if (probability != 0) out.entries.push_back({key.first, key.second, probability});
  }
  return out;
}

Rational revenue_of(const ExactWinning& winning) {
  Rational total = 0;
  for (const auto& e : winning.entries) {
    if (e.value >= e.price) total += e.price * e.probability;
  }
  return total;
}

Rational exact_revenue(const Instance& instance, const PriceVector& prices, TieBreak tie_break) {
  return revenue_of(exact_winning(instance, prices, tie_break));
}

BruteForceResult brute_force_optimum(const Instance& instance, std::vector<Rational> price_set,
                                     TieBreak tie_break, std::uint64_t cap) {
  instance.validate();
  if (price_set.empty()) throw DomainError("price set is empty");
  std::sort(price_set.begin(), price_set.end());
  price_set.erase(std::unique(price_set.begin(), price_set.end()), price_set.end());
  for (const auto& p : price_set) {
    if (!(p > 0)) throw DomainError("prices must be positive");
  }
  const std::size_t n = instance.size();
  Integer total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= static_cast<unsigned long>(price_set.size());
    if (total > cap) {
      throw ResourceError("brute force needs " + std::to_string(price_set.size()) + "^" +
                          std::to_string(n) + " vectors (cap " + std::to_string(cap) + ")");
    }
  }
  check_inputs(instance, PriceVector(n, Price(price_set.front())));

  // Depth-first in lexicographic order, reusing the winner law of each prefix.
  BruteForceResult best;
  bool have_best = false;
  std::vector<std::size_t> choice(n, 0);
  std::vector<Winning> prefix(n + 1);
  std::size_t depth = 0;
  while (true) {
    if (depth == n) {
      ++best.vectors;
      Rational revenue = 0;
      for (const auto& [key, probability] : prefix[n].cells) {
        if (key.first >= key.second) revenue += key.second * probability;
      }
      if (!have_best || revenue > best.revenue) {
        have_best = true;
        best.revenue = std::move(revenue);
        best.prices.clear();
        for (std::size_t c : choice) best.prices.emplace_back(price_set[c]);
      }
      // Advance the odometer.
      while (depth > 0 && choice[depth - 1] + 1 == price_set.size()) {
        choice[depth - 1] = 0;
        --depth;
      }
      if (depth == 0) break;
      ++choice[depth - 1];
      --depth;
    }
    prefix[depth + 1] = add_item(prefix[depth], std::get<DiscreteDistribution>(instance.items[depth]),
                                 Price(price_set[choice[depth]]), tie_break);
    ++depth;
  }
  return best;
}

Estimate monte_carlo_revenue(const Instance& instance, const PriceVector& prices,
                             std::uint64_t samples, std::uint64_t seed) {
  instance.validate();
  if (samples < 1) throw DomainError("need at least one sample");
  if (prices.size() != instance.size()) throw DomainError("price vector length mismatch");
  const std::size_t n = instance.size();

  // Exact ranks of every discrete (item, support point) gap.
  struct DiscreteGap {
    std::size_t item;
    std::size_t k;
    Rational gap;
  };
  std::vector<DiscreteGap> gaps;
  for (std::size_t i = 0; i < n; ++i) {
    const auto* d = std::get_if<DiscreteDistribution>(&instance.items[i]);
    if (d == nullptr || prices[i].is_infinite()) continue;
    for (std::size_t k = 0; k < d->size(); ++k) {
      gaps.push_back({i, k, d->support()[k] - prices[i].value()});
    }
  }
  std::vector<std::size_t> order(gaps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gaps[a].gap < gaps[b].gap; });
  std::vector<std::vector<std::int64_t>> rank(n);
  std::vector<std::vector<bool>> nonnegative(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (const auto* d = std::get_if<DiscreteDistribution>(&instance.items[i])) {
      rank[i].assign(d->size(), 0);
      nonnegative[i].assign(d->size(), false);
    }
  }
  std::int64_t r = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && gaps[order[k - 1]].gap != gaps[order[k]].gap) ++r;
    const auto& g = gaps[order[k]];
    rank[g.item][g.k] = r;
    nonnegative[g.item][g.k] = g.gap >= 0;
  }
  std::vector<double> price_d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!prices[i].is_infinite()) price_d[i] = to_double(prices[i].value());
  }

  RunningStats stats;
  for (std::uint64_t s = 0; s < samples; ++s) {
    bool have = false;
    bool best_discrete = false;
    std::int64_t best_rank = 0;
    double best_gap = 0.0;
    bool best_buys = false;
    std::size_t best_item = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = keyed_uniform(seed, i, s);
      if (prices[i].is_infinite()) continue;
      bool discrete = false;
      std::int64_t item_rank = 0;
      double gap = 0.0;
      bool buys = false;
      if (const auto* d = std::get_if<DiscreteDistribution>(&instance.items[i])) {
        const std::size_t k = d->sample_index(u);
        discrete = true;
        item_rank = rank[i][k];
        gap = to_double(d->support()[k]) - price_d[i];
        buys = nonnegative[i][k];
      } else {
        gap = std::get<CdfOracle>(instance.items[i]).sample(u) - price_d[i];
        buys = gap >= 0.0;
      }
      bool takes = !have;
      if (have) {
        const bool exact = discrete && best_discrete;
        const bool greater = exact ? item_rank > best_rank : gap > best_gap;
        const bool equal = exact ? item_rank == best_rank : gap == best_gap;
        takes = greater || (equal && instance.tie_break == TieBreak::HighestIndex);
      }
      if (takes) {
        have = true;
        best_discrete = discrete;
        best_rank = item_rank;
        best_gap = gap;
        best_buys = buys;
        best_item = i;
      }
    }
    stats.add(have && best_buys ? price_d[best_item] : 0.0);
  }
  return stats.estimate();
}

}  // namespace unidemand
