#include "eqbound/group.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace eqbound {

namespace {

constexpr std::size_t kExhaustiveAssociativityCap = 256;
constexpr std::size_t kSampledAssociativityTriples = 100000;

// Minimal deterministic mixer for sampled associativity checks.
std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

FiniteGroup::FiniteGroup(std::vector<std::string> elements,
                         std::vector<std::size_t> compose_row_major,
                         std::vector<std::size_t> generators)
    : elements_(std::move(elements)), compose_(std::move(compose_row_major)),
      generators_(std::move(generators)) {
    const std::size_t n = elements_.size();
    if (n == 0) throw invalid_input("group needs at least one element");
    if (compose_.size() != n * n) throw invalid_input("composition table must be |G| x |G|");
    for (std::size_t v : compose_)
        if (v >= n) throw invalid_input("composition table entry out of range");

    // Identity: the unique e with e*g = g*e = g for all g.
    bool found_identity = false;
    for (std::size_t e = 0; e < n && !found_identity; ++e) {
        bool ok = true;
        for (std::size_t g = 0; g < n; ++g)
            if (compose_[e * n + g] != g || compose_[g * n + e] != g) {
                ok = false;
                break;
            }
        if (ok) {
            identity_ = e;
            found_identity = true;
        }
    }
    if (!found_identity) throw invalid_input("composition table has no identity element");

    inverse_.assign(n, n);
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) {
            if (compose_[g * n + h] == identity_ && compose_[h * n + g] == identity_) {
                inverse_[g] = h;
                break;
            }
        }
        if (inverse_[g] == n) throw invalid_input("element " + elements_[g] + " has no inverse");
    }

    if (n <= kExhaustiveAssociativityCap) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (compose_[compose_[a * n + b] * n + c] != compose_[a * n + compose_[b * n + c]]) {
                        throw invalid_input("associativity fails on (" + elements_[a] + "," +
                                            elements_[b] + "," + elements_[c] + ")");
                    }
    } else {
        std::uint64_t state = 0x5eed5eed5eedULL ^ n;
        for (std::size_t t = 0; t < kSampledAssociativityTriples; ++t) {
            const std::size_t a = splitmix(state) % n;
            const std::size_t b = splitmix(state) % n;
            const std::size_t c = splitmix(state) % n;
            if (compose_[compose_[a * n + b] * n + c] != compose_[a * n + compose_[b * n + c]]) {
                throw invalid_input("associativity fails on sampled triple (" + elements_[a] + "," +
                                    elements_[b] + "," + elements_[c] + ")");
            }
        }
    }

    if (generators_.empty()) {
        for (std::size_t g = 0; g < n; ++g)
            if (g != identity_) generators_.push_back(g);
        if (n == 1) generators_.push_back(identity_);
    }
    std::sort(generators_.begin(), generators_.end());
    generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
    for (std::size_t g : generators_) {
        if (g >= n) throw invalid_input("generator index out of range");
        if (!std::binary_search(generators_.begin(), generators_.end(), inverse_[g])) {
            throw invalid_input("generator set not symmetric-closed: missing inverse of " + elements_[g]);
        }
    }

    // Word lengths by BFS from the identity.
    word_length_.assign(n, std::numeric_limits<std::size_t>::max());
    word_length_[identity_] = 0;
    std::deque<std::size_t> queue{identity_};
    while (!queue.empty()) {
        const std::size_t g = queue.front();
        queue.pop_front();
        for (std::size_t s : generators_) {
            const std::size_t h = compose_[g * n + s];
            if (word_length_[h] == std::numeric_limits<std::size_t>::max()) {
                word_length_[h] = word_length_[g] + 1;
                queue.push_back(h);
            }
        }
    }
    for (std::size_t g = 0; g < n; ++g) {
        if (word_length_[g] == std::numeric_limits<std::size_t>::max()) {
            throw invalid_input("disconnected Cayley graph: generators do not reach " + elements_[g]);
        }
    }

    // Same policy as the associativity check: exhaustive on small groups,
    // sampled triples above.
    right_invariant_ = true;
    if (n <= kExhaustiveAssociativityCap) {
        for (std::size_t g = 0; g < n && right_invariant_; ++g)
            for (std::size_t h = 0; h < n && right_invariant_; ++h)
                for (std::size_t k = 0; k < n; ++k) {
                    if (word_dist(compose_[g * n + k], compose_[h * n + k]) != word_dist(g, h)) {
                        right_invariant_ = false;
                        break;
                    }
                }
    } else {
        std::uint64_t state = 0x716874ULL ^ n;
        for (std::size_t t = 0; t < kSampledAssociativityTriples && right_invariant_; ++t) {
            const std::size_t g = splitmix(state) % n;
            const std::size_t h = splitmix(state) % n;
            const std::size_t k = splitmix(state) % n;
            if (word_dist(compose_[g * n + k], compose_[h * n + k]) != word_dist(g, h))
                right_invariant_ = false;
        }
    }
}

FiniteGroup FiniteGroup::with_generators(std::vector<std::size_t> generators) const {
    return FiniteGroup(elements_, compose_, std::move(generators));
}

FiniteMetricSpace FiniteGroup::word_metric_space() const {
    const std::size_t n = size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h) d[g * n + h] = static_cast<double>(word_dist(g, h));
    return FiniteMetricSpace(elements_, std::move(d));
}

bool TransformationSubset::contains(std::size_t g) const {
    return std::binary_search(members.begin(), members.end(), g);
}

double density(const TransformationSubset& subset) {
    if (subset.members.empty()) throw invalid_input("density of an empty subset is undefined");
    return subset.measure_fraction();
}

bool is_subgroup(const FiniteGroup& group, const TransformationSubset& subset) {
    if (subset.members.empty()) return false;
    if (!subset.contains(group.identity())) return false;
    for (std::size_t g : subset.members) {
        if (!subset.contains(group.inverse(g))) return false;
        for (std::size_t h : subset.members)
            if (!subset.contains(group.compose(g, h))) return false;
    }
    return true;
}

namespace {

std::string numbered(const std::string& prefix, std::size_t i, std::size_t m) {
    std::size_t width = 1, v = m > 0 ? m - 1 : 0;
    while (v >= 10) {
        v /= 10;
        ++width;
    }
    std::string s = std::to_string(i);
    while (s.size() < width) s.insert(s.begin(), '0');
    return prefix + s;
}

} // namespace

FiniteGroup make_cyclic_group(std::size_t n) {
    if (n == 0) throw invalid_input("cyclic group order must be positive");
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < n; ++i) elems.push_back(numbered("g", i, n));
    std::vector<std::size_t> table(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) table[a * n + b] = (a + b) % n;
    std::vector<std::size_t> gens;
    if (n > 1) {
        gens.push_back(1 % n);
        gens.push_back(n - 1);
    } else {
        gens.push_back(0);
    }
    return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

FiniteGroup make_dihedral_group(std::size_t n) {
    if (n < 2) throw invalid_input("dihedral group needs n >= 2");
    const std::size_t order = 2 * n;
    auto idx = [n](std::size_t rot, std::size_t flip) { return flip * n + rot; };
    std::vector<std::string> elems(order);
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t r = 0; r < n; ++r)
            elems[idx(r, f)] = (f ? "s_r" : "r") + numbered("", r, n);
    // (r^a s^f)(r^b s^g) = r^(a + (-1)^f b) s^(f xor g)
    std::vector<std::size_t> table(order * order);
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t g = 0; g < 2; ++g)
                for (std::size_t b = 0; b < n; ++b) {
                    const std::size_t rot = f == 0 ? (a + b) % n : (a + n - b % n) % n;
                    table[idx(a, f) * order + idx(b, g)] = idx(rot, f ^ g);
                }
    std::vector<std::size_t> gens{idx(1 % n, 0), idx(n - 1, 0), idx(0, 1)};
    return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

FiniteGroup make_torus2d_group(std::size_t m) {
    if (m == 0) throw invalid_input("torus group order must be positive");
    const std::size_t order = m * m;
    auto idx = [m](std::size_t a, std::size_t b) { return a * m + b; };
    std::vector<std::string> elems(order);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            elems[idx(a, b)] = "v" + numbered("", a, m) + "_" + numbered("", b, m);
    std::vector<std::size_t> table(order * order);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d)
                    table[idx(a, b) * order + idx(c, d)] = idx((a + c) % m, (b + d) % m);
    std::vector<std::size_t> gens;
    if (m > 1) {
        gens = {idx(1, 0), idx(m - 1, 0), idx(0, 1), idx(0, m - 1)};
    } else {
        gens = {idx(0, 0)};
    }
    return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

FiniteGroup make_group_preset(const std::string& name) {
    if (name == "rotation360") return make_cyclic_group(360);
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const std::string kind = name.substr(0, colon);
        const std::size_t arg = static_cast<std::size_t>(std::stoul(name.substr(colon + 1)));
        if (kind == "cyclic") return make_cyclic_group(arg);
        if (kind == "dihedral") return make_dihedral_group(arg);
        if (kind == "torus2d") return make_torus2d_group(arg);
    }
    throw invalid_input("unknown group preset: " + name);
}

FiniteGroup load_group_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("group JSON parse error: ") + e.what());
    }
    std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::size_t> table;
    for (const auto& row : j.at("compose"))
        for (const auto& v : row) table.push_back(v.get<std::size_t>());
    std::vector<std::size_t> gens;
    if (j.contains("generators")) gens = j.at("generators").get<std::vector<std::size_t>>();
    return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

} // namespace eqbound
