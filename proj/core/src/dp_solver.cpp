#include "unidemand/dp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

__extension__ using Wide = __int128;

constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 62;

std::int64_t checked_int64(const Integer& value, const std::string& what) {
  if (!value.fits_slong_p() || value > kMaxDenominator) {
    throw ResourceError(what + " " + value.get_str() + " exceeds 2^62");
  }
  return value.get_si();
}

std::size_t cell_count(std::size_t k1, std::size_t k2) {
  if (k1 == 0 || k2 == 0) throw DomainError("value and price grids must be nonempty");
  if (k1 > std::numeric_limits<std::uint32_t>::max() / k2) {
    throw ResourceError("grid has too many cells");
  }
  return k1 * k2;
}

}  // namespace

// ---------------------------------------------------------------------------
// WinningDistribution

WinningDistribution::WinningDistribution(std::size_t k1, std::size_t k2, std::int64_t denominator,
                                         std::vector<Cell> cells)
    : k1_(k1), k2_(k2), denominator_(denominator), cells_(std::move(cells)) {}

std::int64_t WinningDistribution::units(std::size_t i1, std::size_t i2) const {
  const auto index = static_cast<std::uint32_t>(i1 * k2_ + i2);
  const auto it = std::lower_bound(cells_.begin(), cells_.end(), index,
                                   [](const Cell& c, std::uint32_t x) { return c.index < x; });
  return it != cells_.end() && it->index == index ? it->units : 0;
}

std::vector<std::int64_t> WinningDistribution::dense() const {
  std::vector<std::int64_t> out(k1_ * k2_, 0);
  for (const auto& c : cells_) out[c.index] = c.units;
  return out;
}

std::int64_t WinningDistribution::total() const {
  std::int64_t sum = 0;
  for (const auto& c : cells_) sum += c.units;
  return sum;
}

bool operator<(const WinningDistribution& a, const WinningDistribution& b) {
  std::size_t i = 0;
  while (i < a.cells_.size() && i < b.cells_.size()) {
    const auto& x = a.cells_[i];
    const auto& y = b.cells_[i];
    if (x.index != y.index) {
      // The one with the earlier nonzero cell is larger there.
      return x.index > y.index;
    }
    if (x.units != y.units) return x.units < y.units;
    ++i;
  }
  // A remaining nonzero cell makes that matrix larger.
  return a.cells_.size() < b.cells_.size();
}

std::size_t WinningDistribution::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& c : cells_) {
    h ^= c.index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(c.units) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Reference operations

WinningDistribution base_distribution(const std::vector<Rational>& values,
                                      const std::vector<Rational>& prices,
                                      std::int64_t denominator) {
  cell_count(values.size(), prices.size());
  std::size_t best1 = 0;
  std::size_t best2 = 0;
  Rational best_gap = values[0] - prices[0];
  for (std::size_t i1 = 0; i1 < values.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < prices.size(); ++i2) {
      Rational gap = values[i1] - prices[i2];
      if (gap < best_gap) {
        best_gap = std::move(gap);
        best1 = i1;
        best2 = i2;
      }
    }
  }
  return WinningDistribution(
      values.size(), prices.size(), denominator,
      {{static_cast<std::uint32_t>(best1 * prices.size() + best2), denominator}});
}

RationalMatrix transition(const WinningDistribution& wd, const DiscreteDistribution& item,
                          std::size_t j, const std::vector<Rational>& values,
                          const std::vector<Rational>& prices, TieBreak tie_break) {
  if (j >= prices.size()) throw DomainError("price index out of range");
  if (item.support() != values) throw DomainError("item must be supported on the value grid");
  const std::size_t k1 = values.size();
  const std::size_t k2 = prices.size();
  const bool new_wins_ties = tie_break == TieBreak::HighestIndex;
  RationalMatrix old{k1, k2, std::vector<Rational>(k1 * k2)};
  for (const auto& c : wd.cells()) old.cells[c.index] = ratio(Integer(static_cast<long>(c.units)), Integer(static_cast<long>(wd.denominator())));

  RationalMatrix out{k1, k2, std::vector<Rational>(k1 * k2)};
  for (std::size_t i1 = 0; i1 < k1; ++i1) {
    for (std::size_t i2 = 0; i2 < k2; ++i2) {
      const Rational gap = values[i1] - prices[i2];
      // Probability that the new item does not displace the current winner.
      Rational keep = 0;
      for (std::size_t k = 0; k < k1; ++k) {
        const Rational new_gap = values[k] - prices[j];
        if (new_wins_ties ? new_gap < gap : new_gap <= gap) keep += item.masses()[k];
      }
      Rational value = old.at(i1, i2) * keep;
      if (i2 == j) {
        // The new item takes over from every cell it beats.
        Rational beaten = 0;
        for (std::size_t a = 0; a < k1; ++a) {
          for (std::size_t b = 0; b < k2; ++b) {
            const Rational other = values[a] - prices[b];
            if (new_wins_ties ? other <= gap : other < gap) beaten += old.at(a, b);
          }
        }
        value += beaten * item.masses()[i1];
      }
      out.cells[i1 * k2 + i2] = value;
    }
  }
  return out;
}

WinningDistribution canonical_round(const RationalMatrix& matrix, std::int64_t denominator) {
  std::vector<Integer> floors(matrix.cells.size());
  std::vector<bool> fractional(matrix.cells.size());
  Rational remainder_sum = 0;
  for (std::size_t c = 0; c < matrix.cells.size(); ++c) {
    const Rational scaled = matrix.cells[c] * denominator;
    floors[c] = floor(scaled);
    const Rational delta = scaled - Rational(floors[c]);
    fractional[c] = delta > 0;
    remainder_sum += delta;
  }
  if (remainder_sum.get_den() != 1) {
    throw std::logic_error("canonical rounding: remainders do not sum to an integer");
  }
  Integer l = remainder_sum.get_num();
  std::vector<WinningDistribution::Cell> cells;
  for (std::size_t c = 0; c < matrix.cells.size(); ++c) {
    Integer units = floors[c];
    if (fractional[c] && l > 0) {
      units += 1;
      l -= 1;
    }
    if (units != 0) cells.push_back({static_cast<std::uint32_t>(c), units.get_si()});
  }
  return WinningDistribution(matrix.k1, matrix.k2, denominator, std::move(cells));
}

Rational revenue_of(const WinningDistribution& wd, const std::vector<Rational>& values,
                    const std::vector<Rational>& prices) {
  Rational total = 0;
  for (const auto& c : wd.cells()) {
    const std::size_t i1 = c.index / prices.size();
    const std::size_t i2 = c.index % prices.size();
    if (values[i1] >= prices[i2]) total += prices[i2] * c.units;
  }
  return total / wd.denominator();
}

// ---------------------------------------------------------------------------
// Sparse engine

DpContext::DpContext(const RestrictedInstance& ri, TieBreak tie_break, std::int64_t denominator)
    : ri_(&ri), tie_break_(tie_break), denominator_(denominator) {
  if (denominator < 1 || denominator > kMaxDenominator) {
    throw DomainError("DP denominator must lie in [1, 2^62]");
  }
  const std::size_t k1 = ri.k1();
  const std::size_t k2 = ri.k2();
  const std::size_t cells = cell_count(k1, k2);

  // Rank every cell by its gap v - p. Binary64 settles clearly separated
  // gaps; near-equal ones are compared exactly.
  std::vector<double> v(k1);
  std::vector<double> p(k2);
  for (std::size_t i = 0; i < k1; ++i) v[i] = to_double(ri.values[i]);
  for (std::size_t i = 0; i < k2; ++i) p[i] = to_double(ri.prices[i]);
  const auto compare = [&](std::uint32_t a, std::uint32_t b) -> int {
    const std::size_t a1 = a / k2, a2 = a % k2, b1 = b / k2, b2 = b % k2;
    const double ga = v[a1] - p[a2];
    const double gb = v[b1] - p[b2];
    const double scale = std::max({std::abs(v[a1]), std::abs(p[a2]), std::abs(v[b1]),
                                   std::abs(p[b2])});
    if (std::abs(ga - gb) > 1e-12 * scale) return ga < gb ? -1 : 1;
    return cmp(Rational(ri.values[a1] + ri.prices[b2]), Rational(ri.values[b1] + ri.prices[a2]));
  };
  std::vector<std::uint32_t> order(cells);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return compare(a, b) < 0; });
  rank_.assign(cells, 0);
  std::uint32_t rank = 0;
  for (std::size_t k = 1; k < cells; ++k) {
    if (compare(order[k - 1], order[k]) != 0) ++rank;
    rank_[order[k]] = rank;
  }
  sells_.assign(cells, false);
  for (std::size_t c = 0; c < cells; ++c) sells_[c] = ri.values[c / k2] >= ri.prices[c % k2];

  for (const auto& item : ri.instance.items) {
    const auto* d = std::get_if<DiscreteDistribution>(&item);
    if (d == nullptr || d->support() != ri.values) {
      throw DomainError("restricted instance items must be discrete on the common value grid");
    }
    Integer lcm = 1;
    for (const auto& m : d->masses()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.get_den_mpz_t());
    ItemUnits units;
    units.denominator = checked_int64(lcm, "item mass denominator");
    for (std::size_t k = 0; k < d->size(); ++k) {
      if (d->masses()[k] == 0) continue;
      const Integer u = d->masses()[k].get_num() * (lcm / d->masses()[k].get_den());
      units.masses.emplace_back(static_cast<std::uint32_t>(k), u.get_si());
    }
    item_units_.push_back(std::move(units));
  }
}

WinningDistribution DpContext::base() const {
  const std::size_t k2 = ri_->k2();
  std::uint32_t best = 0;
  for (std::uint32_t c = 0; c < rank_.size(); ++c) {
    if (rank_[c] < rank_[best]) best = c;
  }
  return WinningDistribution(ri_->k1(), k2, denominator_, {{best, denominator_}});
}

WinningDistribution DpContext::step(const WinningDistribution& wd, std::size_t item,
                                    std::size_t j) const {
  const std::size_t k2 = ri_->k2();
  if (j >= k2) throw DomainError("price index out of range");
  const ItemUnits& units = item_units_.at(item);
  const bool new_wins_ties = tie_break_ == TieBreak::HighestIndex;

  // The new item's cells (k, j) by rank, with cumulative mass.
  struct Ranked {
    std::uint32_t rank;
    std::int64_t units;
  };
  std::vector<Ranked> fresh;
  fresh.reserve(units.masses.size());
  for (const auto& [k, u] : units.masses) fresh.push_back({rank_[k * k2 + j], u});
  std::sort(fresh.begin(), fresh.end(),
            [](const Ranked& a, const Ranked& b) { return a.rank < b.rank; });
  std::vector<std::int64_t> fresh_prefix(fresh.size() + 1, 0);
  for (std::size_t k = 0; k < fresh.size(); ++k) fresh_prefix[k + 1] = fresh_prefix[k] + fresh[k].units;

  // Current cells by rank, with cumulative mass.
  std::vector<Ranked> current;
  current.reserve(wd.cells().size());
  for (const auto& c : wd.cells()) current.push_back({rank_[c.index], c.units});
  std::sort(current.begin(), current.end(),
            [](const Ranked& a, const Ranked& b) { return a.rank < b.rank; });
  std::vector<std::int64_t> current_prefix(current.size() + 1, 0);
  for (std::size_t k = 0; k < current.size(); ++k) {
    current_prefix[k + 1] = current_prefix[k] + current[k].units;
  }

  // Mass of `list` with rank < r (strict) or <= r.
  const auto mass_below = [](const std::vector<Ranked>& list, const std::vector<std::int64_t>& prefix,
                             std::uint32_t r, bool inclusive) {
    const auto it = inclusive
                        ? std::upper_bound(list.begin(), list.end(), r,
                                           [](std::uint32_t x, const Ranked& e) { return x < e.rank; })
                        : std::lower_bound(list.begin(), list.end(), r,
                                           [](const Ranked& e, std::uint32_t x) { return e.rank < x; });
    return prefix[static_cast<std::size_t>(it - list.begin())];
  };

  std::vector<std::pair<std::uint32_t, Wide>> out;
  out.reserve(wd.cells().size() + units.masses.size());
  for (const auto& c : wd.cells()) {
    // The current winner survives when the new gap is below its own
    // (or equal to it, if the current winner keeps ties).
    const std::int64_t keep = mass_below(fresh, fresh_prefix, rank_[c.index], !new_wins_ties);
    if (keep > 0) out.emplace_back(c.index, static_cast<Wide>(c.units) * keep);
  }
  for (const auto& [k, u] : units.masses) {
    const std::uint32_t index = static_cast<std::uint32_t>(k * k2 + j);
    const std::int64_t beaten = mass_below(current, current_prefix, rank_[index], new_wins_ties);
    if (beaten > 0) out.emplace_back(index, static_cast<Wide>(u) * beaten);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Merge duplicates, then round canonically.
  std::vector<std::pair<std::uint32_t, Wide>> merged;
  for (const auto& entry : out) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second += entry.second;
    } else {
      merged.push_back(entry);
    }
  }
  const Wide d = units.denominator;
  Wide remainder_sum = 0;
  for (const auto& [index, value] : merged) remainder_sum += value % d;
  if (remainder_sum % d != 0) throw std::logic_error("DP step lost mass");
  Wide l = remainder_sum / d;
  last_step_rounded_ = remainder_sum != 0;
  std::vector<WinningDistribution::Cell> cells;
  cells.reserve(merged.size());
  for (const auto& [index, value] : merged) {
    Wide q = value / d;
    if (value % d != 0 && l > 0) {
      ++q;
      --l;
    }
    if (q != 0) cells.push_back({index, static_cast<std::int64_t>(q)});
  }
  return WinningDistribution(ri_->k1(), k2, denominator_, std::move(cells));
}

Rational DpContext::revenue(const WinningDistribution& wd) const {
  const std::size_t k2 = ri_->k2();
  // Sum units per sellable price column first.
  std::vector<std::pair<std::uint32_t, std::int64_t>> columns;
  for (const auto& c : wd.cells()) {
    if (!sells_[c.index]) continue;
    columns.emplace_back(static_cast<std::uint32_t>(c.index % k2), c.units);
  }
  std::sort(columns.begin(), columns.end());
  Rational total = 0;
  for (std::size_t k = 0; k < columns.size();) {
    std::int64_t sum = 0;
    const std::uint32_t column = columns[k].first;
    for (; k < columns.size() && columns[k].first == column; ++k) sum += columns[k].second;
    total += ri_->prices[column] * Rational(static_cast<long>(sum));
  }
  return total / Rational(static_cast<long>(denominator_));
}

// ---------------------------------------------------------------------------

std::int64_t default_denominator(const RestrictedInstance& ri) {
  const Integer m = rounding_base(ri.instance.size(), ri.price_ratio());
  return checked_int64(m * m * m, "default denominator");
}

std::int64_t exact_denominator(const RestrictedInstance& ri) {
  Integer product = 1;
  for (const auto& item : ri.instance.items) {
    const auto& d = std::get<DiscreteDistribution>(item);
    Integer lcm = 1;
    for (const auto& m : d.masses()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m.get_den_mpz_t());
    product *= lcm;
    checked_int64(product, "exact-mode denominator");
  }
  return product.get_si();
}

DpResult run_dp(const RestrictedInstance& ri, TieBreak tie_break, const DpOptions& options) {
  ri.instance.validate();
  DpResult result;
  result.denominator = options.exact ? exact_denominator(ri)
                                     : options.denominator.value_or(default_denominator(ri));
  const DpContext context(ri, tie_break, result.denominator);

  struct Hash {
    std::size_t operator()(const WinningDistribution& w) const { return w.hash(); }
  };
  using BackPointer = std::pair<std::uint32_t, std::uint32_t>;  // (predecessor, price index)

  std::vector<WinningDistribution> layer{context.base()};
  std::vector<std::vector<BackPointer>> back(ri.instance.size());
  result.layer_sizes.push_back(1);

  for (std::size_t i = 0; i < ri.instance.size(); ++i) {
    std::vector<WinningDistribution> next;
    std::vector<BackPointer> pointers;
    std::unordered_map<WinningDistribution, std::uint32_t, Hash> seen;
    for (std::uint32_t s = 0; s < layer.size(); ++s) {
      for (std::uint32_t j = 0; j < ri.k2(); ++j) {
        WinningDistribution state = context.step(layer[s], i, j);
        if (seen.find(state) != seen.end()) continue;  // first writer wins
        seen.emplace(state, static_cast<std::uint32_t>(next.size()));
        next.push_back(std::move(state));
        pointers.emplace_back(s, j);
        if (next.size() > options.state_cap) {
          throw ResourceError("DP layer " + std::to_string(i + 1) + " exceeded the state cap of " +
                              std::to_string(options.state_cap) + " states");
        }
      }
    }
    // Canonical order within the layer.
    std::vector<std::uint32_t> order(next.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return next[a] < next[b]; });
    std::vector<WinningDistribution> sorted;
    sorted.reserve(next.size());
    back[i].reserve(next.size());
    for (std::uint32_t k : order) {
      sorted.push_back(std::move(next[k]));
      back[i].push_back(pointers[k]);
    }
    layer = std::move(sorted);
    result.layer_sizes.push_back(layer.size());
  }

  // Best final state; the layer is sorted, so the first maximiser is the
  // lexicographically smallest.
  std::size_t best = 0;
  Rational best_revenue = context.revenue(layer[0]);
  for (std::size_t s = 1; s < layer.size(); ++s) {
    Rational revenue = context.revenue(layer[s]);
    if (revenue > best_revenue) {
      best_revenue = std::move(revenue);
      best = s;
    }
  }
  result.predicted_revenue = best_revenue;
  result.final_state = layer[best];
  result.price_indices.assign(ri.instance.size(), 0);
  std::size_t at = best;
  for (std::size_t i = ri.instance.size(); i-- > 0;) {
    result.price_indices[i] = back[i][at].second;
    at = back[i][at].first;
  }
  for (std::size_t index : result.price_indices) result.prices.emplace_back(ri.prices[index]);
  return result;
}

}  // namespace unidemand
