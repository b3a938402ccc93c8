#include "eqbound/kt_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "eqbound/covering.hpp"
#include "eqbound/rng.hpp"

namespace eqbound {

namespace {

constexpr double kSlack = 1e-12;

struct LatticeSearch {
    const FiniteMetricSpace& space;
    std::vector<double> grid;
    double lipschitz;
    std::vector<double> current;
    std::vector<std::vector<double>> found;

    bool feasible(std::size_t z) const {
        for (std::size_t w = 0; w < z; ++w) {
            if (std::abs(current[z] - current[w]) > lipschitz * space.dist(z, w) + kSlack) {
                return false;
            }
        }
        return true;
    }

    void assign(std::size_t z) {
        if (z == current.size()) {
            found.push_back(current);
            return;
        }
        for (double v : grid) {
            current[z] = v;
            if (feasible(z)) assign(z + 1);
        }
    }
};

// Grid-level view of a function family with hash lookup and window-based
// enumeration of closed sup-balls (radius counted in grid levels).
struct LevelIndex {
    std::size_t dim = 0;
    int radius_levels = 0;
    int max_level = 0;
    std::vector<std::vector<int>> levels;
    std::unordered_map<std::uint64_t, std::size_t> index;

    LevelIndex(const std::vector<std::vector<double>>& fns, double radius, double resolution) {
        dim = fns.front().size();
        radius_levels = static_cast<int>(std::floor(radius / resolution + 1e-9));
        double lo = fns.front().front();
        for (const auto& f : fns)
            for (double v : f) lo = std::min(lo, v);
        levels.assign(fns.size(), std::vector<int>(dim));
        for (std::size_t i = 0; i < fns.size(); ++i)
            for (std::size_t c = 0; c < dim; ++c) {
                levels[i][c] = static_cast<int>(std::llround((fns[i][c] - lo) / resolution));
                max_level = std::max(max_level, levels[i][c]);
            }
        index.reserve(fns.size() * 2);
        for (std::size_t i = 0; i < fns.size(); ++i) index.emplace(key(levels[i]), i);
    }

    std::uint64_t key(const std::vector<int>& lv) const {
        std::uint64_t k = 0;
        for (int v : lv) k = k * 4099 + static_cast<std::uint64_t>(v + 1);
        return k;
    }

    template <class Fn> void for_ball(std::size_t center, Fn&& fn) const {
        const auto& c = levels[center];
        std::vector<int> combo(dim), lo(dim), hi(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::max(0, c[d] - radius_levels);
            hi[d] = std::min(max_level, c[d] + radius_levels);
            combo[d] = lo[d];
        }
        while (true) {
            const auto it = index.find(key(combo));
            if (it != index.end()) fn(it->second);
            std::size_t d = dim;
            bool stepped = false;
            while (d > 0) {
                --d;
                if (combo[d] < hi[d]) {
                    ++combo[d];
                    stepped = true;
                    break;
                }
                combo[d] = lo[d];
            }
            if (!stepped) return;
        }
    }
};

struct CoverState {
    const LevelIndex& ix;
    std::vector<char> covered;
    std::size_t remaining;

    explicit CoverState(const LevelIndex& ix_)
        : ix(ix_), covered(ix_.levels.size(), 0), remaining(ix_.levels.size()) {}

    std::size_t gain(std::size_t center) const {
        std::size_t g = 0;
        ix.for_ball(center, [&](std::size_t p) {
            if (!covered[p]) ++g;
        });
        return g;
    }

    void take(std::size_t center) {
        ix.for_ball(center, [&](std::size_t p) {
            if (!covered[p]) {
                covered[p] = 1;
                --remaining;
            }
        });
    }
};

std::vector<std::size_t> lazy_greedy_cover(const LevelIndex& ix, CoverState& state) {
    using Entry = std::pair<std::size_t, std::size_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t i = 0; i < ix.levels.size(); ++i) {
        if (!state.covered[i]) heap.emplace(state.gain(i), i);
    }
    std::vector<std::size_t> picked;
    while (state.remaining > 0 && !heap.empty()) {
        const auto [stale, cand] = heap.top();
        heap.pop();
        const std::size_t g = state.gain(cand);
        if (g == 0) continue;
        if (!heap.empty() && g < heap.top().first) {
            heap.emplace(g, cand);
            continue;
        }
        picked.push_back(cand);
        state.take(cand);
    }
    return picked;
}

// Drop centers whose ball is covered by the rest.
void eliminate_redundant(const LevelIndex& ix, std::vector<std::size_t>& centers) {
    std::vector<int> count(ix.levels.size(), 0);
    for (std::size_t c : centers) ix.for_ball(c, [&](std::size_t p) { ++count[p]; });
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            bool removable = true;
            ix.for_ball(centers[i], [&](std::size_t p) {
                if (count[p] <= 1) removable = false;
            });
            if (removable) {
                ix.for_ball(centers[i], [&](std::size_t p) { --count[p]; });
                centers.erase(centers.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
}

} // namespace

std::vector<std::vector<double>> lipschitz_lattice(const FiniteMetricSpace& space, double M,
                                                   double resolution, double lipschitz) {
    if (!(M > 0.0) || !(resolution > 0.0)) throw invalid_input("lattice needs positive M and resolution");
    const double steps = M / resolution;
    const auto levels = static_cast<std::size_t>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(levels)) > 1e-9) {
        throw invalid_input("lattice resolution must divide the range M exactly");
    }
    std::vector<double> grid(levels + 1);
    for (std::size_t i = 0; i <= levels; ++i)
        grid[i] = -M / 2.0 + static_cast<double>(i) * resolution;
    LatticeSearch search{space, std::move(grid), lipschitz, std::vector<double>(space.size(), 0.0), {}};
    search.assign(0);
    return search.found;
}

std::size_t sup_cover_upper(const std::vector<std::vector<double>>& fns, double radius,
                            double resolution, SupCoverOptions options) {
    if (fns.empty()) return 0;
    const LevelIndex ix(fns, radius, resolution);
    CoverState state(ix);
    std::vector<std::size_t> best = lazy_greedy_cover(ix, state);
    eliminate_redundant(ix, best);

    // Destroy-and-repair: drop a few random centers, rebuild greedily from
    // candidates around the holes, keep any non-worsening solution.
    SplitMix64 rng(options.seed);
    std::vector<std::size_t> current = best;
    for (std::size_t it = 0; it < options.refine_iterations; ++it) {
        std::vector<std::size_t> sol = current;
        const std::size_t k = 3 + rng.below(8);
        for (std::size_t r = 0; r < k && !sol.empty(); ++r)
            sol.erase(sol.begin() + static_cast<std::ptrdiff_t>(rng.below(sol.size())));
        CoverState st(ix);
        for (std::size_t c : sol) st.take(c);
        while (st.remaining > 0) {
            std::size_t hole = 0;
            while (st.covered[hole]) ++hole;
            std::size_t best_gain = 0, best_cand = hole;
            ix.for_ball(hole, [&](std::size_t cand) {
                const std::size_t g = st.gain(cand);
                if (g > best_gain || (g == best_gain && (rng.next() & 1))) {
                    best_gain = g;
                    best_cand = cand;
                }
            });
            sol.push_back(best_cand);
            st.take(best_cand);
        }
        eliminate_redundant(ix, sol);
        if (sol.size() <= current.size()) current = sol;
        if (sol.size() < best.size()) best = sol;
    }
    return best.size();
}

std::size_t sup_packing_lower(const std::vector<std::vector<double>>& fns, double gap) {
    std::vector<std::size_t> kept;
    const std::size_t dim = fns.empty() ? 0 : fns.front().size();
    for (std::size_t i = 0; i < fns.size(); ++i) {
        bool ok = true;
        for (std::size_t k : kept) {
            double d = 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                d = std::max(d, std::abs(fns[i][c] - fns[k][c]));
            if (!(d > gap + kSlack)) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(i);
    }
    return kept.size();
}

std::size_t sup_cover_exact(const std::vector<std::vector<double>>& fns, double radius) {
    if (fns.size() > 64) throw size_cap_error("exact sup cover limited to 64 functions");
    // The family under the sup metric is itself a finite metric space;
    // duplicates would break positivity, so deduplicate first.
    std::vector<std::vector<double>> uniq;
    for (const auto& f : fns) {
        bool dup = false;
        for (const auto& g : uniq)
            if (g == f) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(f);
    }
    const std::size_t n = uniq.size();
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = "f" + std::to_string(i);
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double d = 0.0;
            for (std::size_t c = 0; c < uniq[a].size(); ++c)
                d = std::max(d, std::abs(uniq[a][c] - uniq[b][c]));
            dist[a * n + b] = d;
        }
    FiniteMetricSpace fspace(std::move(labels), std::move(dist));
    return static_cast<std::size_t>(covering_number(fspace, radius).count);
}

} // namespace eqbound
