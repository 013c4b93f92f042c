#pragma once

#include "nid/polynomial.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace nid {

/// Cyclic n-roots: for 1 <= j < n the sum of the n cyclic products of j
/// consecutive variables, and x1*...*xn - 1.
PolySystem<double> cyclic(std::size_t n);

/// Four equations in four unknowns whose solution set has one component of
/// each dimension 3 and 2, twelve lines and four isolated points:
///   (x1-1)(x1-2)(x1-3)(x1-4), (x1-1)(x2-1)(x2-2)(x2-3),
///   (x1-1)(x1-2)(x3-1)(x3-2), (x1-1)(x2-1)(x3-1)(x4-1),
/// expanded into sparse terms.
PolySystem<double> demo_system();

/// The two-equation system (x1-1)(x1-2), (x1-1)x2^2: the line x1 = 1 and the
/// double point (2, 0).
PolySystem<double> line_and_double_point();

struct SquaringRecord {
    enum class Kind { already_square, added_hyperplanes, added_slacks };

    Kind kind = Kind::already_square;
    /// Appended rows for an underdetermined system: [c0, c1, ..., cn].
    std::vector<std::vector<ComplexD>> hyperplanes;
    /// Added columns for an overdetermined system: multipliers[s][i] is the
    /// coefficient of slack s in equation i.
    std::vector<std::vector<ComplexD>> multipliers;

    std::size_t added() const { return hyperplanes.size() + multipliers.size(); }

    /// Reproduces the squared system from the original one.
    PolySystem<double> apply(const PolySystem<double>& original) const;
};

/// Adds random hyperplanes (fewer equations than unknowns) or random slack
/// columns (more equations than unknowns) until the system is square.
std::pair<PolySystem<double>, SquaringRecord> square_up(const PolySystem<double>& f, std::uint64_t seed);

/// A square system f(x) = 0 in n unknowns augmented with k slack variables
/// z1..zk and k random hyperplanes:
///   f_i(x) + sum_j gamma(i, j) z_j = 0,            i = 1..n
///   c_j0 + c_j1 x1 + ... + c_jn xn + z_j = 0,      j = 1..k
/// Slack variables follow the original ones; hyperplane j is equation n + j.
class EmbeddedSystem {
public:
    EmbeddedSystem() = default;
    EmbeddedSystem(PolySystem<double> base, std::vector<std::vector<ComplexD>> gammas,
                   std::vector<std::vector<ComplexD>> hyperplanes, std::uint64_t seed);

    const PolySystem<double>& base() const { return base_; }
    std::size_t n() const { return base_.nvars(); }
    std::size_t k() const { return hyperplanes_.size(); }
    std::size_t total_vars() const { return n() + k(); }
    std::uint64_t seed() const { return seed_; }

    const ComplexD& gamma(std::size_t eq, std::size_t slack) const { return gammas_[eq][slack]; }
    const std::vector<std::vector<ComplexD>>& gammas() const { return gammas_; }
    /// Hyperplane j as [c0, c1, ..., cn].
    const std::vector<ComplexD>& hyperplane(std::size_t j) const { return hyperplanes_[j]; }
    const std::vector<std::vector<ComplexD>>& hyperplanes() const { return hyperplanes_; }

    /// The n + k equations in n + k unknowns.
    PolySystem<double> system() const;

    /// The embedding of one dimension lower: last slack and hyperplane removed.
    EmbeddedSystem lowered() const;

    /// Same embedding with hyperplane constants c_j0 replaced.
    EmbeddedSystem with_constants(const std::vector<ComplexD>& c0) const;

    /// Deletes slack columns and hyperplanes, giving back the base system.
    PolySystem<double> strip() const;

private:
    PolySystem<double> base_;
    std::vector<std::vector<ComplexD>> gammas_;
    std::vector<std::vector<ComplexD>> hyperplanes_;
    std::uint64_t seed_ = 0;
};

/// Embeds a square system with k slack variables; k = 0 returns f itself.
EmbeddedSystem embed(const PolySystem<double>& f, std::size_t k, std::uint64_t seed);

/// Sets every slack variable to zero: n + k equations in the n original unknowns.
PolySystem<double> slice_to_zero(const EmbeddedSystem& e);

} // namespace nid
