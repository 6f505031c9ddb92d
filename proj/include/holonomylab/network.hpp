#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace hlab {

/// Single-mode cavity. Only the net decay gamma0 - gamma1 enters the
/// Hamiltonian; the gain circuit itself is not modelled.
struct CavityParams {
    double f0_hz = 0.0;
    double gamma0_hz = 0.0;
    double gamma1_hz = 0.0;

    double net_decay_hz() const { return gamma0_hz - gamma1_hz; }

    // Throws ConfigError unless f0 > 0, gamma0 >= 0, gamma1 >= 0 and
    // gamma0 >= gamma1 (no net gain).
    void validate() const;

    bool operator==(const CavityParams&) const = default;
};

/// Unordered pair of site labels.
struct Edge {
    std::string a;
    std::string b;

    bool connects(std::string_view x, std::string_view y) const {
        return (a == x && b == y) || (a == y && b == x);
    }
    bool same_as(const Edge& other) const { return connects(other.a, other.b); }
    std::string name() const { return a + "-" + b; }
};

class CavityNetwork {
public:
    CavityNetwork(std::vector<std::string> labels, std::vector<CavityParams> params,
                  std::vector<Edge> edges);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<CavityParams>& params() const { return params_; }
    const std::vector<Edge>& edges() const { return edges_; }
    /// Site indices of each edge, parallel to edges().
    const std::vector<std::pair<std::size_t, std::size_t>>& edge_sites() const {
        return edge_sites_;
    }

    // Throws ConfigError for unknown labels / edges.
    std::size_t index_of(std::string_view label) const;
    std::size_t edge_index(const Edge& edge) const;
    bool has_site(std::string_view label) const;

    /// Mean resonance frequency; the rotating frame removes 2*pi times this.
    double reference_frequency_hz() const;

    /// Same physical network with sites listed in a different order:
    /// new site k is old site order[k].
    CavityNetwork permuted(std::span<const std::size_t> order) const;

    // {"sites":[{"label","f0_hz","gamma0_hz","gamma1_hz"}], "edges":[["A","X"],...]}
    static CavityNetwork from_json(const nlohmann::json& doc);
    static CavityNetwork load(const std::filesystem::path& file);
    nlohmann::json to_json() const;

private:
    std::vector<std::string> labels_;
    std::vector<CavityParams> params_;
    std::vector<Edge> edges_;
    std::vector<std::pair<std::size_t, std::size_t>> edge_sites_;
};

enum class Frame { rotating, lab };

Frame parse_frame(std::string_view name);
std::string_view frame_name(Frame frame);

/// Complex Hamiltonian in rad/s, rows/columns in `basis` order.
struct HamiltonianMatrix {
    Eigen::MatrixXcd matrix;
    std::vector<std::string> basis;
};

/// H = 2*pi * (diag(f0 - i*(gamma0 - gamma1)) + sum_e kappa_e (|a><b| + |b><a|)).
/// In the rotating frame the reference frequency is removed from the diagonal.
/// `hoppings_hz` is indexed like network.edges().
HamiltonianMatrix assemble_hamiltonian(const CavityNetwork& network,
                                       std::span<const double> hoppings_hz,
                                       Frame frame = Frame::rotating);

/// Real symmetric hopping part alone (rad/s).
Eigen::MatrixXd hopping_matrix(const CavityNetwork& network, std::span<const double> hoppings_hz);

struct LossFactorization {
    HamiltonianMatrix lossless;
    double decay_hz = 0.0;
};

/// Splits off a uniform -2*pi*i*Gamma*I term. Throws NumericalError when the
/// imaginary diagonal is not uniform.
LossFactorization factor_uniform_loss(const HamiltonianMatrix& h);

namespace presets {

inline constexpr double f0_hz = 1624.0;
inline constexpr double gamma_net_hz = 0.6;
inline constexpr double bare_gamma0_hz = 8.0;
inline constexpr double gain_gamma1_hz = bare_gamma0_hz - gamma_net_hz;
inline constexpr double kappa0_hz = 8.5;

/// Gain-enhanced cavity: f0 = 1624 Hz, net decay 0.6 Hz.
CavityParams paper_cavity();
/// Same cavity without the gain circuit: decay 8 Hz.
CavityParams bare_cavity();
CavityParams lossless_cavity();

// Site orders below are part of the public contract.
CavityNetwork two_site(const CavityParams& p = paper_cavity());        // A, X
CavityNetwork three_site_chain(const CavityParams& p = paper_cavity()); // A, X, S
CavityNetwork z_gate_network(const CavityParams& p = paper_cavity());   // A, B, X, S; B isolated
CavityNetwork four_site_star(const CavityParams& p = paper_cavity());   // A, B, S, X
CavityNetwork five_site_star(const CavityParams& p = paper_cavity());   // A, B, C, S, X

/// Looks up one of the networks above by name ("two_site", "three_site",
/// "z_gate", "four_site_star", "five_site_star").
CavityNetwork network_by_name(std::string_view name, const CavityParams& p);
CavityParams cavity_by_name(std::string_view name);

} // namespace presets

} // namespace hlab
