#include "fracheat/measure.hpp"

#include <algorithm>
#include <cmath>

#include "fracheat/errors.hpp"
#include "fracheat/stable.hpp"

namespace fracheat {

InitialMeasure InitialMeasure::dirac(double mass, double location) {
    InitialMeasure m;
    m.add_atom(location, mass);
    return m;
}

InitialMeasure InitialMeasure::lebesgue(double c) {
    // constant density everywhere: degenerate polyline plus constant tail
    return with_density({-1.0, 1.0}, {c, c}, TailKind::constant, c);
}

InitialMeasure InitialMeasure::indicator(double half_width, double height) {
    if (half_width <= 0.0) throw OutOfRange("indicator: half_width must be > 0");
    return with_density({-half_width, half_width}, {height, height});
}

InitialMeasure InitialMeasure::with_density(std::vector<double> xs, std::vector<double> ys,
                                            TailKind tail, double tail_c) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw OutOfRange("with_density: need >= 2 matching nodes");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw OutOfRange("with_density: xs must ascend");
    for (double y : ys)
        if (!(y >= 0.0)) throw OutOfRange("with_density: density must be >= 0");
    if (tail_c < 0.0) throw OutOfRange("with_density: tail_c must be >= 0");
    if (tail == TailKind::none && tail_c != 0.0)
        throw OutOfRange("with_density: tail_c requires constant tail");
    InitialMeasure m;
    m.xs_ = std::move(xs);
    m.ys_ = std::move(ys);
    m.tail_ = tail;
    m.tail_c_ = (tail == TailKind::constant) ? tail_c : 0.0;
    return m;
}

void InitialMeasure::add_atom(double location, double mass) {
    if (!(mass > 0.0)) throw OutOfRange("add_atom: mass must be > 0");
    atoms_.push_back({location, mass});
}

double InitialMeasure::density_at(double y) const {
    if (!has_density()) return 0.0;
    if (y < xs_.front() || y > xs_.back())
        return tail_ == TailKind::constant ? tail_c_ : 0.0;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
    const std::size_t i = std::min(xs_.size() - 1,
                                   static_cast<std::size_t>(it - xs_.begin()));
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const double w = (xs_[lo + 1] > xs_[lo]) ? (y - xs_[lo]) / (xs_[lo + 1] - xs_[lo]) : 0.0;
    return ys_[lo] + w * (ys_[lo + 1] - ys_[lo]);
}

double InitialMeasure::atom_mass_total() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.mass;
    return s;
}

double InitialMeasure::density_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
        s += 0.5 * (ys_[i] + ys_[i + 1]) * (xs_[i + 1] - xs_[i]);
    return s;
}

double InitialMeasure::sup_density() const {
    double s = tail_c_;
    for (double y : ys_) s = std::max(s, y);
    return s;
}

bool InitialMeasure::is_zero() const {
    if (!atoms_.empty()) return false;
    if (tail_c_ > 0.0) return false;
    for (double y : ys_)
        if (y > 0.0) return false;
    return true;
}

double InitialMeasure::ma_bound(double a) const {
    // sup_y Σ m_i/(1+|y-x_i|^{1+a}) <= Σ m_i, and for the density part
    // sup f * ∫ dz/(1+|z|^{1+a}) = sup f * 2 * beta_integral(a-1, 0).
    const double kernel_mass = 2.0 * beta_integral(a - 1.0, 0.0);
    return atom_mass_total() + sup_density() * kernel_mass;
}

InitialMeasure InitialMeasure::scaled(double c) const {
    if (!(c > 0.0)) throw OutOfRange("scaled: factor must be > 0");
    InitialMeasure m = *this;
    for (auto& a : m.atoms_) a.mass *= c;
    for (auto& y : m.ys_) y *= c;
    m.tail_c_ *= c;
    return m;
}

bool InitialMeasure::leq(const InitialMeasure& lhs, const InitialMeasure& rhs) {
    for (const auto& a : lhs.atoms_) {
        double covered = 0.0;
        for (const auto& b : rhs.atoms_)
            if (b.location == a.location) covered += b.mass;
        if (covered + 1e-15 < a.mass) return false;
    }
    if (lhs.tail_c_ > rhs.tail_c_ + 1e-15) return false;
    // piecewise-linear comparison: both sides are linear between merged breakpoints
    std::vector<double> knots(lhs.xs_.begin(), lhs.xs_.end());
    knots.insert(knots.end(), rhs.xs_.begin(), rhs.xs_.end());
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    for (double k : knots)
        if (lhs.density_at(k) > rhs.density_at(k) + 1e-12) return false;
    return true;
}

} // namespace fracheat
