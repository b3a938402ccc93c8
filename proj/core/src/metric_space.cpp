#include "eqbound/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace eqbound {

namespace {
constexpr double kTriangleSlack = 1e-9;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<double> dist_row_major)
    : labels_(std::move(labels)), dist_(std::move(dist_row_major)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw invalid_input("metric space needs at least one point");
    if (dist_.size() != n * n) {
        std::ostringstream os;
        os << "distance table size " << dist_.size() << " does not match " << n << "x" << n;
        throw invalid_input(os.str());
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i * n + i] != 0.0) {
            throw invalid_input("dist(" + labels_[i] + "," + labels_[i] + ") must be 0");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = dist_[i * n + j];
            const double dji = dist_[j * n + i];
            if (dij != dji) {
                throw invalid_input("asymmetric distance between " + labels_[i] + " and " + labels_[j]);
            }
            if (!(dij > 0.0) || !std::isfinite(dij)) {
                throw invalid_input("dist(" + labels_[i] + "," + labels_[j] + ") must be finite and positive");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (dist_[i * n + j] > dist_[i * n + k] + dist_[k * n + j] + kTriangleSlack) {
                    throw invalid_input("triangle inequality fails on (" + labels_[i] + "," +
                                        labels_[j] + "," + labels_[k] + ")");
                }
            }
        }
    }
}

double FiniteMetricSpace::diameter() const {
    double d = 0.0;
    for (double v : dist_) d = std::max(d, v);
    return d;
}

std::vector<double> FiniteMetricSpace::distance_values() const {
    std::vector<double> vals;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) vals.push_back(dist(i, j));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

FiniteMetricSpace FiniteMetricSpace::restrict(const std::vector<std::size_t>& points) const {
    std::vector<std::string> labels;
    labels.reserve(points.size());
    for (std::size_t p : points) labels.push_back(labels_[p]);
    std::vector<double> d(points.size() * points.size(), 0.0);
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = 0; b < points.size(); ++b)
            d[a * points.size() + b] = dist(points[a], points[b]);
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

double min_separation(const FiniteMetricSpace& space) {
    const std::size_t n = space.size();
    if (n < 2) throw invalid_input("undefined separation: space has a single point");
    double m = space.dist(0, 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m = std::min(m, space.dist(i, j));
    return m;
}

namespace {

std::string numbered_label(const char* prefix, std::size_t i, std::size_t width) {
    std::string s = std::to_string(i);
    while (s.size() < width) s.insert(s.begin(), '0');
    return std::string(prefix) + s;
}

std::size_t digits(std::size_t m) {
    std::size_t w = 1;
    while (m >= 10) {
        m /= 10;
        ++w;
    }
    return w;
}

} // namespace

FiniteMetricSpace make_cycle_space(std::size_t m) {
    if (m == 0) throw invalid_input("cycle size must be positive");
    const std::size_t w = digits(m - 1);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(numbered_label("c", i, w));
    std::vector<double> d(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t fwd = (j >= i) ? j - i : i - j;
            d[i * m + j] = static_cast<double>(std::min(fwd, m - fwd));
        }
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace make_path_space(std::size_t m) {
    if (m == 0) throw invalid_input("path size must be positive");
    const std::size_t w = digits(m - 1);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back(numbered_label("p", i, w));
    std::vector<double> d(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            d[i * m + j] = static_cast<double>(j >= i ? j - i : i - j);
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace make_torus2d_space(std::size_t m) {
    if (m == 0) throw invalid_input("torus size must be positive");
    const std::size_t n = m * m;
    const std::size_t w = digits(m - 1);
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            labels.push_back("t" + numbered_label("", a, w) + "_" + numbered_label("", b, w));
    auto cyc = [m](std::size_t x, std::size_t y) {
        const std::size_t fwd = (y >= x) ? y - x : x - y;
        return std::min(fwd, m - fwd);
    };
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] = static_cast<double>(cyc(i / m, j / m) + cyc(i % m, j % m));
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

FiniteMetricSpace load_metric_space_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("metric space JSON parse error: ") + e.what());
    }
    if (j.contains("preset")) {
        const std::string preset = j.at("preset").get<std::string>();
        const std::size_t m = j.at("size").get<std::size_t>();
        if (preset == "cycle") return make_cycle_space(m);
        if (preset == "path") return make_path_space(m);
        if (preset == "torus2d") return make_torus2d_space(m);
        throw invalid_input("unknown metric space preset: " + preset);
    }
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    const auto& rows = j.at("dist");
    if (!rows.is_array() || rows.size() != labels.size()) {
        throw invalid_input("dist must be a square table matching labels");
    }
    std::vector<double> d;
    d.reserve(labels.size() * labels.size());
    for (const auto& row : rows) {
        if (row.size() != labels.size()) throw invalid_input("dist must be a square table matching labels");
        for (const auto& v : row) d.push_back(v.get<double>());
    }
    return FiniteMetricSpace(std::move(labels), std::move(d));
}

} // namespace eqbound
