#pragma once

#include <span>
#include <vector>

namespace fracheat {

struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

enum class TailKind { none, constant };

/// Nonnegative initial measure: point masses plus a piecewise-linear density
/// on a bounded support, optionally extended by a constant beyond the support.
class InitialMeasure {
public:
    InitialMeasure() = default;

    static InitialMeasure zero() { return {}; }
    static InitialMeasure dirac(double mass = 1.0, double location = 0.0);
    static InitialMeasure lebesgue(double c = 1.0);
    static InitialMeasure indicator(double half_width, double height = 1.0);
    static InitialMeasure with_density(std::vector<double> xs, std::vector<double> ys,
                                       TailKind tail = TailKind::none,
                                       double tail_c = 0.0);

    void add_atom(double location, double mass);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool has_density() const { return xs_.size() >= 2; }
    std::span<const double> density_xs() const { return xs_; }
    std::span<const double> density_ys() const { return ys_; }
    TailKind tail() const { return tail_; }
    double tail_c() const { return tail_c_; }

    /// Density part evaluated at y (polyline inside the support, tail outside).
    double density_at(double y) const;

    double atom_mass_total() const;
    double density_mass() const; // polyline part only; infinite tails excluded
    double sup_density() const;
    bool is_zero() const;

    /// Numeric upper bound for sup_y ∫ mu(dx) / (1 + |y-x|^{1+a}).
    double ma_bound(double a) const;

    InitialMeasure scaled(double c) const;

    /// Representation order: every atom of lhs is dominated by a same-location
    /// atom of rhs, the densities are ordered pointwise, and the tails are ordered.
    static bool leq(const InitialMeasure& lhs, const InitialMeasure& rhs);

private:
    std::vector<Atom> atoms_;
    std::vector<double> xs_, ys_;
    TailKind tail_ = TailKind::none;
    double tail_c_ = 0.0;
};

} // namespace fracheat
