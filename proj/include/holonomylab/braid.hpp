#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "holonomylab/control_path.hpp"

namespace hlab {

enum class Generator { g1, g1_inv, g2, g2_inv };

/// Word in the B3 generators, written as a matrix product: "G2 G1" means G1 is
/// applied first. Tokens: G1, G2, G1', G2' (G1_inv / G2_inv also accepted).
class BraidWord {
public:
    BraidWord() = default;
    explicit BraidWord(std::vector<Generator> letters) : letters_(std::move(letters)) {}

    /// Throws ConfigError on unknown tokens.
    static BraidWord parse(std::string_view text);

    const std::vector<Generator>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    std::string to_string() const;
    BraidWord inverse() const;
    BraidWord then(const BraidWord& later) const;

    bool operator==(const BraidWord&) const = default;

private:
    std::vector<Generator> letters_;
};

/// Axes of the five-site star, in hopping-vector order: A-X, B-X, C-X, S-X.
std::vector<Edge> braid_axes();

/// Closed loop on the five-site star based at the S-only direction. G1 is the
/// octant S -> A -> B -> S, G2 the octant S -> B -> C -> S; inverses run backwards.
ControlPath compile_braid(const BraidWord& word, double kappa_max_hz, LegTiming timing);

/// Ordered product of generator matrices in the (A, B, C) zero-mode basis.
Eigen::Matrix3d predict_holonomy(const BraidWord& word);

} // namespace hlab
