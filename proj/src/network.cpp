#include "holonomylab/network.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "holonomylab/error.hpp"

namespace hlab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw ConfigError(where + ": missing numeric field \"" + key + "\"");
    }
    return obj.at(key).get<double>();
}

} // namespace

void CavityParams::validate() const {
    if (!std::isfinite(f0_hz) || !std::isfinite(gamma0_hz) || !std::isfinite(gamma1_hz)) {
        throw ConfigError("cavity parameters must be finite");
    }
    if (f0_hz <= 0.0) throw ConfigError("cavity f0 must be positive");
    if (gamma0_hz < 0.0 || gamma1_hz < 0.0) throw ConfigError("cavity loss/gain rates must be >= 0");
    if (gamma0_hz < gamma1_hz) {
        throw ConfigError("net gain (gamma1 > gamma0) is not supported");
    }
}

CavityNetwork::CavityNetwork(std::vector<std::string> labels, std::vector<CavityParams> params,
                             std::vector<Edge> edges)
    : labels_(std::move(labels)), params_(std::move(params)), edges_(std::move(edges)) {
    if (labels_.empty()) throw ConfigError("network has no sites");
    if (params_.size() != labels_.size()) {
        throw ConfigError("network needs one CavityParams per site");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (label.empty()) throw ConfigError("empty site label");
        if (!seen.insert(label).second) throw ConfigError("duplicate site label " + label);
    }
    for (const auto& p : params_) p.validate();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& edge = edges_[e];
        if (edge.a == edge.b) throw ConfigError("self-edge on site " + edge.a);
        for (std::size_t f = 0; f < e; ++f) {
            if (edges_[f].same_as(edge)) throw ConfigError("duplicate edge " + edge.name());
        }
        edge_sites_.emplace_back(index_of(edge.a), index_of(edge.b));
    }
}

bool CavityNetwork::has_site(std::string_view label) const {
    for (const auto& l : labels_) {
        if (l == label) return true;
    }
    return false;
}

std::size_t CavityNetwork::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) return i;
    }
    throw ConfigError("unknown site label \"" + std::string(label) + "\"");
}

std::size_t CavityNetwork::edge_index(const Edge& edge) const {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].same_as(edge)) return e;
    }
    throw ConfigError("unknown edge " + edge.name());
}

double CavityNetwork::reference_frequency_hz() const {
    double sum = 0.0;
    for (const auto& p : params_) sum += p.f0_hz;
    return sum / static_cast<double>(params_.size());
}

CavityNetwork CavityNetwork::permuted(std::span<const std::size_t> order) const {
    if (order.size() != size()) throw ConfigError("permutation size mismatch");
    std::vector<std::string> labels;
    std::vector<CavityParams> params;
    for (std::size_t k : order) {
        if (k >= size()) throw ConfigError("permutation index out of range");
        labels.push_back(labels_[k]);
        params.push_back(params_[k]);
    }
    return CavityNetwork(std::move(labels), std::move(params), edges_);
}

CavityNetwork CavityNetwork::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("network: expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "sites" && key != "edges") {
            throw ConfigError("network: unknown key \"" + key + "\"");
        }
    }
    if (!doc.contains("sites") || !doc.at("sites").is_array()) {
        throw ConfigError("network: \"sites\" must be an array");
    }
    std::vector<std::string> labels;
    std::vector<CavityParams> params;
    std::size_t idx = 0;
    for (const auto& site : doc.at("sites")) {
        const std::string where = "network.sites[" + std::to_string(idx++) + "]";
        if (!site.is_object()) throw ConfigError(where + ": expected an object");
        for (const auto& [key, _] : site.items()) {
            if (key != "label" && key != "f0_hz" && key != "gamma0_hz" && key != "gamma1_hz") {
                throw ConfigError(where + ": unknown key \"" + key + "\"");
            }
        }
        if (!site.contains("label") || !site.at("label").is_string()) {
            throw ConfigError(where + ": missing string field \"label\"");
        }
        labels.push_back(site.at("label").get<std::string>());
        params.push_back({require_number(site, "f0_hz", where),
                          require_number(site, "gamma0_hz", where),
                          require_number(site, "gamma1_hz", where)});
    }
    std::vector<Edge> edges;
    if (doc.contains("edges")) {
        if (!doc.at("edges").is_array()) throw ConfigError("network: \"edges\" must be an array");
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
                throw ConfigError("network: each edge must be a pair of site labels");
            }
            edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
        }
    }
    return CavityNetwork(std::move(labels), std::move(params), std::move(edges));
}

CavityNetwork CavityNetwork::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open network file " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json CavityNetwork::to_json() const {
    nlohmann::json sites = nlohmann::json::array();
    for (std::size_t i = 0; i < size(); ++i) {
        sites.push_back({{"label", labels_[i]},
                         {"f0_hz", params_[i].f0_hz},
                         {"gamma0_hz", params_[i].gamma0_hz},
                         {"gamma1_hz", params_[i].gamma1_hz}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : edges_) edges.push_back({e.a, e.b});
    return {{"sites", sites}, {"edges", edges}};
}

Frame parse_frame(std::string_view name) {
    if (name == "rotating") return Frame::rotating;
    if (name == "lab") return Frame::lab;
    throw ConfigError("unknown frame \"" + std::string(name) + "\" (expected rotating|lab)");
}

std::string_view frame_name(Frame frame) {
    return frame == Frame::rotating ? "rotating" : "lab";
}

Eigen::MatrixXd hopping_matrix(const CavityNetwork& network, std::span<const double> hoppings_hz) {
    if (hoppings_hz.size() != network.edges().size()) {
        throw ConfigError("hopping vector has " + std::to_string(hoppings_hz.size()) +
                          " entries, network has " + std::to_string(network.edges().size()) +
                          " edges");
    }
    const auto n = static_cast<Eigen::Index>(network.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t e = 0; e < hoppings_hz.size(); ++e) {
        if (!std::isfinite(hoppings_hz[e])) {
            throw ConfigError("non-finite hopping on edge " + network.edges()[e].name());
        }
        const auto [i, j] = network.edge_sites()[e];
        const double v = two_pi * hoppings_hz[e];
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
        h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += v;
    }
    return h;
}

HamiltonianMatrix assemble_hamiltonian(const CavityNetwork& network,
                                       std::span<const double> hoppings_hz, Frame frame) {
    HamiltonianMatrix h;
    h.basis = network.labels();
    h.matrix = hopping_matrix(network, hoppings_hz).cast<std::complex<double>>();
    const double f_ref = frame == Frame::rotating ? network.reference_frequency_hz() : 0.0;
    for (std::size_t i = 0; i < network.size(); ++i) {
        const auto& p = network.params()[i];
        const auto k = static_cast<Eigen::Index>(i);
        h.matrix(k, k) = two_pi * std::complex<double>(p.f0_hz - f_ref, -p.net_decay_hz());
    }
    return h;
}

LossFactorization factor_uniform_loss(const HamiltonianMatrix& h) {
    const auto n = h.matrix.rows();
    if (n == 0) throw NumericalError("empty Hamiltonian");
    const double im0 = h.matrix(0, 0).imag();
    for (Eigen::Index i = 1; i < n; ++i) {
        const double im = h.matrix(i, i).imag();
        if (std::abs(im - im0) > 1e-12 * std::max(1.0, std::abs(im0))) {
            throw NumericalError("non-uniform loss: uniform-loss factorization is invalid");
        }
    }
    LossFactorization out;
    out.lossless = h;
    for (Eigen::Index i = 0; i < n; ++i) {
        out.lossless.matrix(i, i) = {h.matrix(i, i).real(), 0.0};
    }
    out.decay_hz = -im0 / two_pi;
    return out;
}

namespace presets {

CavityParams paper_cavity() { return {f0_hz, bare_gamma0_hz, gain_gamma1_hz}; }
CavityParams bare_cavity() { return {f0_hz, bare_gamma0_hz, 0.0}; }
CavityParams lossless_cavity() { return {f0_hz, 0.0, 0.0}; }

namespace {
CavityNetwork uniform(std::vector<std::string> labels, std::vector<Edge> edges,
                      const CavityParams& p) {
    std::vector<CavityParams> params(labels.size(), p);
    return CavityNetwork(std::move(labels), std::move(params), std::move(edges));
}
} // namespace

CavityNetwork two_site(const CavityParams& p) { return uniform({"A", "X"}, {{"A", "X"}}, p); }

CavityNetwork three_site_chain(const CavityParams& p) {
    return uniform({"A", "X", "S"}, {{"A", "X"}, {"X", "S"}}, p);
}

CavityNetwork z_gate_network(const CavityParams& p) {
    return uniform({"A", "B", "X", "S"}, {{"A", "X"}, {"X", "S"}}, p);
}

CavityNetwork four_site_star(const CavityParams& p) {
    return uniform({"A", "B", "S", "X"}, {{"A", "X"}, {"B", "X"}, {"S", "X"}}, p);
}

CavityNetwork five_site_star(const CavityParams& p) {
    return uniform({"A", "B", "C", "S", "X"}, {{"A", "X"}, {"B", "X"}, {"C", "X"}, {"S", "X"}},
                   p);
}

CavityNetwork network_by_name(std::string_view name, const CavityParams& p) {
    if (name == "two_site") return two_site(p);
    if (name == "three_site") return three_site_chain(p);
    if (name == "z_gate") return z_gate_network(p);
    if (name == "four_site_star") return four_site_star(p);
    if (name == "five_site_star") return five_site_star(p);
    throw ConfigError("unknown network preset \"" + std::string(name) + "\"");
}

CavityParams cavity_by_name(std::string_view name) {
    if (name == "paper") return paper_cavity();
    if (name == "bare") return bare_cavity();
    if (name == "lossless") return lossless_cavity();
    throw ConfigError("unknown cavity preset \"" + std::string(name) +
                      "\" (expected paper|bare|lossless)");
}

} // namespace presets

} // namespace hlab
