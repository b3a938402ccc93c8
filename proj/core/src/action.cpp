#include "eqbound/action.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "eqbound/group.hpp"

namespace eqbound {

namespace {

constexpr std::size_t kExhaustiveCompatibilityOps = 1u << 24;

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    }
};

} // namespace

GroupAction::GroupAction(FiniteGroup group, FiniteMetricSpace space,
                         std::vector<std::size_t> act_table)
    : group_(std::move(group)), space_(std::move(space)), act_(std::move(act_table)) {
    const std::size_t ng = group_.size();
    const std::size_t nz = space_.size();
    if (act_.size() != ng * nz) throw invalid_input("action table must be |G| x |Z|");
    for (std::size_t v : act_)
        if (v >= nz) throw invalid_input("action table entry out of range");

    act_inv_.assign(ng * nz, nz);
    for (std::size_t g = 0; g < ng; ++g) {
        std::vector<char> seen(nz, 0);
        for (std::size_t z = 0; z < nz; ++z) {
            const std::size_t t = act_[g * nz + z];
            if (seen[t]) {
                throw invalid_input("element " + group_.element(g) + " does not act bijectively (hits " +
                                    space_.label(t) + " twice)");
            }
            seen[t] = 1;
            act_inv_[g * nz + t] = z;
        }
    }
    for (std::size_t z = 0; z < nz; ++z) {
        if (act_[group_.identity() * nz + z] != z) {
            throw invalid_input("identity must act trivially, moves " + space_.label(z));
        }
    }

    // Compatibility act(g, act(h, z)) = act(gh, z), exhaustive on small
    // instances and sampled above.
    if (ng * ng * nz <= kExhaustiveCompatibilityOps) {
        for (std::size_t g = 0; g < ng; ++g)
            for (std::size_t h = 0; h < ng; ++h) {
                const std::size_t gh = group_.compose(g, h);
                for (std::size_t z = 0; z < nz; ++z) {
                    if (act_[g * nz + act_[h * nz + z]] != act_[gh * nz + z]) {
                        throw invalid_input("action incompatible with composition on (" +
                                            group_.element(g) + "," + group_.element(h) + "," +
                                            space_.label(z) + ")");
                    }
                }
            }
    } else {
        std::uint64_t state = 0xac7104ULL ^ (ng * nz);
        for (std::size_t t = 0; t < 200000; ++t) {
            const std::size_t g = splitmix(state) % ng;
            const std::size_t h = splitmix(state) % ng;
            const std::size_t z = splitmix(state) % nz;
            if (act_[g * nz + act_[h * nz + z]] != act_[group_.compose(g, h) * nz + z]) {
                throw invalid_input("action incompatible with composition on sampled triple (" +
                                    group_.element(g) + "," + group_.element(h) + "," +
                                    space_.label(z) + ")");
            }
        }
    }
}

TransformationSubset GroupAction::full_subset() const {
    TransformationSubset s;
    s.group_size = group_.size();
    s.members.resize(group_.size());
    std::iota(s.members.begin(), s.members.end(), 0);
    return s;
}

TransformationSubset GroupAction::identity_subset() const {
    TransformationSubset s;
    s.group_size = group_.size();
    s.members = {group_.identity()};
    return s;
}

TransformationSubset GroupAction::subset_of(std::vector<std::size_t> members) const {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw invalid_input("transformation subset must be nonempty");
    if (members.back() >= group_.size()) throw invalid_input("subset member out of range");
    TransformationSubset s;
    s.group_size = group_.size();
    s.members = std::move(members);
    return s;
}

void GroupAction::attach_split(ProductSplit split) {
    const std::size_t nz = space_.size();
    const std::size_t ny = split.yspace.size();
    if (split.x_of.size() != nz || split.y_of.size() != nz) {
        throw invalid_input("split's x_of/y_of must index every point of Z");
    }
    if (split.y_act.size() != group_.size() * ny) {
        throw invalid_input("split's y_act must be |G| x |Y|");
    }
    for (std::size_t g = 0; g < group_.size(); ++g)
        for (std::size_t z = 0; z < nz; ++z) {
            if (split.y_of[act(g, z)] != split.y_act[g * ny + split.y_of[z]]) {
                throw invalid_input("split inconsistent with action at (" + group_.element(g) + "," +
                                    space_.label(z) + ")");
            }
        }
    split_ = std::move(split);
}

const ProductSplit& GroupAction::split() const {
    if (!split_) throw invalid_input("action has no declared X x Y split");
    return *split_;
}

std::vector<std::vector<std::size_t>> orbits(const GroupAction& action,
                                             const TransformationSubset& subset) {
    const std::size_t nz = action.space().size();
    UnionFind uf(nz);
    for (std::size_t g : subset.members)
        for (std::size_t z = 0; z < nz; ++z) uf.unite(z, action.act(g, z));
    std::vector<std::vector<std::size_t>> groups(nz);
    for (std::size_t z = 0; z < nz; ++z) groups[uf.find(z)].push_back(z);
    std::vector<std::vector<std::size_t>> result;
    for (auto& g : groups)
        if (!g.empty()) result.push_back(std::move(g));
    return result;
}

std::size_t OrbitRepresentatives::rep_index_of(std::size_t z) const {
    const std::size_t rep = projection[z];
    const auto it = std::lower_bound(rep_points.begin(), rep_points.end(), rep);
    return static_cast<std::size_t>(it - rep_points.begin());
}

OrbitRepresentatives orbit_representatives(const GroupAction& action,
                                           const TransformationSubset& subset) {
    const auto parts = orbits(action, subset);
    const auto& space = action.space();
    std::vector<std::size_t> projection(space.size(), 0);
    std::vector<std::size_t> reps;
    for (const auto& orbit : parts) {
        std::size_t best = orbit.front();
        for (std::size_t z : orbit)
            if (space.label(z) < space.label(best)) best = z;
        for (std::size_t z : orbit) projection[z] = best;
        reps.push_back(best);
    }
    std::sort(reps.begin(), reps.end());
    return OrbitRepresentatives{reps, std::move(projection), space.restrict(reps)};
}

DeformationConstants action_deformation_constants(const GroupAction& action,
                                                  const TransformationSubset& subset,
                                                  const OrbitRepresentatives& reps) {
    const auto& space = action.space();
    DeformationConstants out;
    out.L = 0.0;
    out.L_prime = 0.0;
    out.action_lipschitz = 0.0;
    const auto& rp = reps.rep_points;

    // Condition 1, both directions: d(z0,z0') vs d(g z0, g z0') over
    // representative pairs and subset elements.
    for (std::size_t g : subset.members) {
        for (std::size_t a = 0; a < rp.size(); ++a)
            for (std::size_t b = a + 1; b < rp.size(); ++b) {
                const double base = space.dist(rp[a], rp[b]);
                const double moved = space.dist(action.act(g, rp[a]), action.act(g, rp[b]));
                if (moved == 0.0) {
                    if (base > 0.0 && !(out.L == kInfiniteConstant)) {
                        out.L = kInfiniteConstant;
                        out.witness_L = "d(g z0, g z0') = 0 for g=" + action.group().element(g) +
                                        ", z0=" + space.label(rp[a]) + ", z0'=" + space.label(rp[b]);
                    }
                } else {
                    out.L = std::max(out.L, base / moved);
                }
                if (base == 0.0) continue;
                out.L_prime = std::max(out.L_prime, moved / base);
            }
    }

    // Condition 2 lower: d_G(g,g') vs the set distance between g Z0 and g' Z0.
    const auto& group = action.group();
    for (std::size_t i = 0; i < subset.members.size(); ++i)
        for (std::size_t j = i + 1; j < subset.members.size(); ++j) {
            const std::size_t g = subset.members[i], h = subset.members[j];
            const double dg = static_cast<double>(group.word_dist(g, h));
            double set_dist = std::numeric_limits<double>::max();
            for (std::size_t a : rp)
                for (std::size_t b : rp)
                    set_dist = std::min(set_dist, space.dist(action.act(g, a), action.act(h, b)));
            if (set_dist == 0.0) {
                if (dg > 0.0 && !(out.L == kInfiniteConstant)) {
                    out.L = kInfiniteConstant;
                    out.witness_L = "dist(g Z0, g' Z0) = 0 for g=" + group.element(g) +
                                    ", g'=" + group.element(h);
                }
            } else {
                out.L = std::max(out.L, dg / set_dist);
            }
            // Condition 2 upper uses the same representative on both sides.
            if (dg == 0.0) continue;
            for (std::size_t a : rp) {
                const double moved = space.dist(action.act(g, a), action.act(h, a));
                out.L_prime = std::max(out.L_prime, moved / dg);
            }
        }

    // Whole-group, whole-space Lipschitz constant d(g z, g' z) <= L' d_G(g,g').
    for (std::size_t g = 0; g < group.size(); ++g)
        for (std::size_t h = g + 1; h < group.size(); ++h) {
            const double dg = static_cast<double>(group.word_dist(g, h));
            if (dg == 0.0) continue;
            for (std::size_t z = 0; z < space.size(); ++z) {
                const double moved = space.dist(action.act(g, z), action.act(h, z));
                out.action_lipschitz = std::max(out.action_lipschitz, moved / dg);
            }
        }

    // With no constraining pair (single representative and single subset
    // element) any positive constant satisfies the conditions; report 1.
    if (out.L == 0.0) out.L = 1.0;
    if (out.L_prime == 0.0) out.L_prime = 1.0;
    if (out.action_lipschitz == 0.0) out.action_lipschitz = 1.0;
    return out;
}

GroupAction load_action_json(const std::string& json_text, FiniteMetricSpace space) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("action JSON parse error: ") + e.what());
    }
    FiniteGroup group = load_group_json(j.dump());
    if (!j.contains("act")) throw invalid_input("action JSON needs an \"act\" table");
    std::vector<std::size_t> act;
    act.reserve(group.size() * space.size());
    for (const auto& row : j.at("act"))
        for (const auto& v : row) act.push_back(v.get<std::size_t>());
    return GroupAction(std::move(group), std::move(space), std::move(act));
}

GroupAction make_natural_action_preset(const std::string& name) {
    FiniteGroup group = make_group_preset(name);
    if (name.rfind("cyclic:", 0) == 0 || name == "rotation360") {
        const std::size_t m = group.size();
        FiniteMetricSpace space = make_cycle_space(m);
        std::vector<std::size_t> act(m * m);
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t z = 0; z < m; ++z) act[g * m + z] = (z + g) % m;
        return GroupAction(std::move(group), std::move(space), std::move(act));
    }
    if (name.rfind("dihedral:", 0) == 0) {
        const std::size_t n = group.size() / 2;
        FiniteMetricSpace space = make_cycle_space(n);
        std::vector<std::size_t> act(group.size() * n);
        for (std::size_t f = 0; f < 2; ++f)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t p = 0; p < n; ++p) {
                    const std::size_t flipped = f ? (n - p) % n : p;
                    act[(f * n + r) * n + p] = (flipped + r) % n;
                }
        return GroupAction(std::move(group), std::move(space), std::move(act));
    }
    if (name.rfind("torus2d:", 0) == 0) {
        const std::size_t nz = group.size();
        FiniteMetricSpace space = make_torus2d_space(
            static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(nz)))));
        std::vector<std::size_t> act(nz * nz);
        for (std::size_t g = 0; g < nz; ++g)
            for (std::size_t z = 0; z < nz; ++z) act[g * nz + z] = group.compose(g, z);
        return GroupAction(std::move(group), std::move(space), std::move(act));
    }
    throw invalid_input("no natural action for preset: " + name);
}

std::vector<double> augment_distribution(const GroupAction& action,
                                         const TransformationSubset& subset,
                                         const std::vector<double>& probabilities) {
    const std::size_t nz = action.space().size();
    if (probabilities.size() != nz) throw invalid_input("distribution must cover every point of Z");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw invalid_input("probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw invalid_input("probabilities must sum to 1 within 1e-12");
    std::vector<double> out(nz, 0.0);
    const double w = 1.0 / static_cast<double>(subset.members.size());
    for (std::size_t g : subset.members) {
        for (std::size_t z = 0; z < nz; ++z) {
            out[action.act(g, z)] += w * probabilities[z];
        }
    }
    return out;
}

} // namespace eqbound
