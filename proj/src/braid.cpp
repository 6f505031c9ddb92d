#include <cctype>
#include "holonomylab/braid.hpp"

#include <algorithm>
#include <sstream>

#include "holonomylab/error.hpp"
#include "holonomylab/gates.hpp"

namespace hlab {

namespace {

Generator invert(Generator g) {
    switch (g) {
    case Generator::g1: return Generator::g1_inv;
    case Generator::g1_inv: return Generator::g1;
    case Generator::g2: return Generator::g2_inv;
    case Generator::g2_inv: return Generator::g2;
    }
    return g;
}

const char* token(Generator g) {
    switch (g) {
    case Generator::g1: return "G1";
    case Generator::g1_inv: return "G1'";
    case Generator::g2: return "G2";
    case Generator::g2_inv: return "G2'";
    }
    return "?";
}

Eigen::Matrix3d matrix_of(Generator g) {
    switch (g) {
    case Generator::g1: return gates::g1();
    case Generator::g1_inv: return gates::g1().transpose();
    case Generator::g2: return gates::g2();
    case Generator::g2_inv: return gates::g2().transpose();
    }
    return Eigen::Matrix3d::Identity();
}

ControlPath generator_loop(Generator g, double kappa_max_hz, LegTiming timing) {
    const Edge ax{"A", "X"}, bx{"B", "X"}, cx{"C", "X"}, sx{"S", "X"};
    const bool first_pair = g == Generator::g1 || g == Generator::g1_inv;
    ControlPath loop = first_pair ? octant_loop({sx, bx, ax}, kappa_max_hz, timing)
                                  : octant_loop({sx, cx, bx}, kappa_max_hz, timing);
    if (g == Generator::g1_inv || g == Generator::g2_inv) loop = loop.reversed();
    return loop.embedded(braid_axes());
}

} // namespace

BraidWord BraidWord::parse(std::string_view text) {
    // Tokens may be separated by whitespace or written together ("G2G1").
    std::vector<Generator> letters;
    std::size_t i = 0;
    auto fail = [&](std::size_t from) {
        std::size_t to = from;
        while (to < text.size() && !std::isspace(static_cast<unsigned char>(text[to]))) ++to;
        throw ConfigError("unknown braid generator \"" + std::string(text.substr(from, to - from)) + "\"");
    };
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (text[i] != 'G' || i + 1 >= text.size() || (text[i + 1] != '1' && text[i + 1] != '2')) fail(start);
        const bool first = text[i + 1] == '1';
        i += 2;
        bool inverse = false;
        if (i < text.size() && text[i] == '\'') {
            inverse = true;
            ++i;
        } else if (text.substr(i, 4) == "_inv") {
            inverse = true;
            i += 4;
        }
        if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != 'G') fail(start);
        letters.push_back(first ? (inverse ? Generator::g1_inv : Generator::g1)
                                : (inverse ? Generator::g2_inv : Generator::g2));
    }
    return BraidWord(std::move(letters));
}

std::string BraidWord::to_string() const {
    std::string out;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        if (k) out += ' ';
        out += token(letters_[k]);
    }
    return out;
}

BraidWord BraidWord::inverse() const {
    std::vector<Generator> letters;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) letters.push_back(invert(*it));
    return BraidWord(std::move(letters));
}

BraidWord BraidWord::then(const BraidWord& later) const {
    // Matrix order: later * this, so the later letters go in front.
    std::vector<Generator> letters = later.letters_;
    letters.insert(letters.end(), letters_.begin(), letters_.end());
    return BraidWord(std::move(letters));
}

std::vector<Edge> braid_axes() { return {{"A", "X"}, {"B", "X"}, {"C", "X"}, {"S", "X"}}; }

ControlPath compile_braid(const BraidWord& word, double kappa_max_hz, LegTiming timing) {
    std::vector<PathLeg> legs;
    // Rightmost letter acts first.
    for (auto it = word.letters().rbegin(); it != word.letters().rend(); ++it) {
        const ControlPath loop = generator_loop(*it, kappa_max_hz, timing);
        legs.insert(legs.end(), loop.legs().begin(), loop.legs().end());
    }
    return ControlPath(braid_axes(), std::move(legs), kappa_max_hz);
}

Eigen::Matrix3d predict_holonomy(const BraidWord& word) {
    Eigen::Matrix3d u = Eigen::Matrix3d::Identity();
    for (Generator g : word.letters()) u = u * matrix_of(g);
    return u;
}

} // namespace hlab
