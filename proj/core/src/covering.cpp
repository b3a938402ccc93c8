#include "eqbound/covering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace eqbound {

namespace {

// Bitset covering instances are capped at 64 points, so one word suffices.
using Mask = std::uint64_t;

int popcount(Mask m) { return std::popcount(m); }

std::vector<Mask> ball_masks(const FiniteMetricSpace& space, double radius,
                             const std::vector<std::size_t>& universe) {
    std::vector<Mask> balls(space.size(), 0);
    for (std::size_t c = 0; c < space.size(); ++c) {
        Mask m = 0;
        for (std::size_t k = 0; k < universe.size(); ++k) {
            if (space.dist(c, universe[k]) <= radius) m |= Mask{1} << k;
        }
        balls[c] = m;
    }
    return balls;
}

std::vector<std::size_t> greedy_cover(const std::vector<Mask>& balls, Mask universe) {
    std::vector<std::size_t> picked;
    Mask uncovered = universe;
    while (uncovered != 0) {
        std::size_t best = 0;
        int best_gain = -1;
        for (std::size_t c = 0; c < balls.size(); ++c) {
            const int gain = popcount(balls[c] & uncovered);
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        if (best_gain <= 0) break; // unreachable for balls centered at space points
        picked.push_back(best);
        uncovered &= ~balls[best];
    }
    return picked;
}

struct BranchBound {
    const std::vector<Mask>& balls;
    std::vector<std::size_t> candidates; // ball indices not dominated by another
    std::size_t best_count;
    std::vector<std::size_t> best_pick;
    std::vector<std::size_t> pick;
    int max_ball_size;

    BranchBound(const std::vector<Mask>& b, Mask universe, std::vector<std::size_t> incumbent)
        : balls(b), best_count(incumbent.size()), best_pick(std::move(incumbent)) {
        // Drop balls whose covered set is contained in another ball's.
        std::vector<std::size_t> order(balls.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
            return popcount(balls[a] & universe) > popcount(balls[c] & universe);
        });
        for (std::size_t i : order) {
            const Mask mi = balls[i] & universe;
            if (mi == 0) continue;
            bool dominated = false;
            for (std::size_t j : candidates) {
                if ((mi & ~(balls[j] & universe)) == 0) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) candidates.push_back(i);
        }
        max_ball_size = 1;
        for (std::size_t c : candidates) max_ball_size = std::max(max_ball_size, popcount(balls[c] & universe));
    }

    void search(Mask uncovered) {
        if (uncovered == 0) {
            if (pick.size() < best_count) {
                best_count = pick.size();
                best_pick = pick;
            }
            return;
        }
        const std::size_t lower =
            pick.size() + static_cast<std::size_t>((popcount(uncovered) + max_ball_size - 1) / max_ball_size);
        if (lower >= best_count) return;
        // Branch on the uncovered point with the fewest covering balls.
        int best_point = -1;
        int fewest = 1 << 30;
        Mask u = uncovered;
        while (u != 0) {
            const int p = std::countr_zero(u);
            u &= u - 1;
            int cnt = 0;
            for (std::size_t c : candidates)
                if (balls[c] >> p & 1) ++cnt;
            if (cnt < fewest) {
                fewest = cnt;
                best_point = p;
            }
        }
        std::vector<std::size_t> options;
        for (std::size_t c : candidates)
            if (balls[c] >> best_point & 1) options.push_back(c);
        std::sort(options.begin(), options.end(), [&](std::size_t a, std::size_t c) {
            return popcount(balls[a] & uncovered) > popcount(balls[c] & uncovered);
        });
        for (std::size_t c : options) {
            pick.push_back(c);
            search(uncovered & ~balls[c]);
            pick.pop_back();
        }
    }
};

// Exact minimum cover of `universe_points` by balls of `radius` centered at
// any point of the space.
std::vector<std::size_t> exact_cover_points(const FiniteMetricSpace& space, double radius,
                                            const std::vector<std::size_t>& universe_points,
                                            std::size_t exact_cap) {
    if (universe_points.size() > exact_cap || universe_points.size() > 64) {
        std::ostringstream os;
        os << "exact cover of " << universe_points.size() << " points exceeds cap " << exact_cap
           << "; use greedy mode";
        throw size_cap_error(os.str());
    }
    const Mask universe = universe_points.size() == 64
                              ? ~Mask{0}
                              : (Mask{1} << universe_points.size()) - 1;
    const std::vector<Mask> balls = ball_masks(space, radius, universe_points);
    std::vector<std::size_t> incumbent = greedy_cover(balls, universe);
    BranchBound bb(balls, universe, std::move(incumbent));
    bb.search(universe);
    return bb.best_pick;
}

} // namespace

CoverResult covering_number(const FiniteMetricSpace& space, double radius, CoverMode mode,
                            std::size_t exact_cap) {
    if (!(radius > 0.0)) throw invalid_input("covering radius must be positive");
    std::vector<std::size_t> universe(space.size());
    for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = i;

    CoverResult result;
    result.certificate.radius = radius;
    result.certificate.mode = mode;
    if (mode == CoverMode::exact) {
        result.certificate.centers = exact_cover_points(space, radius, universe, exact_cap);
    } else {
        // Greedy runs wordwise so it also serves spaces above the exact cap.
        const std::size_t n = space.size();
        std::vector<char> covered(n, 0);
        std::size_t remaining = n;
        while (remaining > 0) {
            std::size_t best = 0, best_gain = 0;
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t gain = 0;
                for (std::size_t p = 0; p < n; ++p)
                    if (!covered[p] && space.dist(c, p) <= radius) ++gain;
                if (gain > best_gain) {
                    best_gain = gain;
                    best = c;
                }
            }
            result.certificate.centers.push_back(best);
            for (std::size_t p = 0; p < n; ++p)
                if (!covered[p] && space.dist(best, p) <= radius) {
                    covered[p] = 1;
                    --remaining;
                }
        }
    }
    result.count = static_cast<std::int64_t>(result.certificate.centers.size());
    return result;
}

bool certificate_covers(const FiniteMetricSpace& space, const CoverCertificate& cert) {
    for (std::size_t p = 0; p < space.size(); ++p) {
        bool hit = false;
        for (std::size_t c : cert.centers) {
            if (space.dist(c, p) <= cert.radius) {
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

double doubling_dimension(const FiniteMetricSpace& space, std::size_t exact_cap) {
    const std::size_t n = space.size();
    if (n <= 1) return 0.0;
    std::size_t worst = 1;
    const std::vector<double> radii = space.distance_values();
    for (std::size_t p = 0; p < n; ++p) {
        for (double R : radii) {
            std::vector<std::size_t> ball;
            for (std::size_t q = 0; q < n; ++q)
                if (space.dist(p, q) <= R) ball.push_back(q);
            if (ball.size() <= worst) continue; // cannot beat the current maximum
            const auto cover = exact_cover_points(space, R / 2.0, ball, exact_cap);
            worst = std::max(worst, cover.size());
        }
    }
    return std::log2(static_cast<double>(worst));
}

std::vector<CoverGrowthRow> cover_growth_check(const FiniteMetricSpace& space,
                                               const std::vector<double>& radii,
                                               std::size_t exact_cap) {
    const double ddim = doubling_dimension(space, exact_cap);
    const double diam = space.diameter();
    std::vector<CoverGrowthRow> rows;
    rows.reserve(radii.size());
    for (double eps : radii) {
        CoverGrowthRow row;
        row.radius = eps;
        row.cover_count = covering_number(space, eps, CoverMode::exact, exact_cap).count;
        row.doubling_bound = std::pow(2.0 * diam / eps, ddim);
        row.implied_constant = static_cast<double>(row.cover_count) / row.doubling_bound;
        rows.push_back(row);
    }
    return rows;
}

} // namespace eqbound
