#pragma once

#include <compare>
#include <string>
#include <vector>

#include "jetcal/errors.hpp"

namespace jetcal {

// Coordinates on the third-order jet space: x, y_i, p_i = y_i', q_i = y_i''.
enum class VarKind : unsigned char { X, Y, P, Q };

struct Var {
    VarKind kind{VarKind::X};
    int index{0};  // 1-based for Y/P/Q, 0 for X

    static Var x() { return {VarKind::X, 0}; }
    static Var y(int i) { return {VarKind::Y, i}; }
    static Var p(int i) { return {VarKind::P, i}; }
    static Var q(int i) { return {VarKind::Q, i}; }

    friend auto operator<=>(const Var&, const Var&) = default;
};

inline std::string name(Var v) {
    switch (v.kind) {
        case VarKind::X: return "x";
        case VarKind::Y: return "y" + std::to_string(v.index);
        case VarKind::P: return "p" + std::to_string(v.index);
        case VarKind::Q: return "q" + std::to_string(v.index);
    }
    return "?";
}

// A concrete jet at which expressions and stencils are evaluated.
struct JetPoint {
    double x{0.0};
    std::vector<double> y, p, q;

    JetPoint() = default;
    JetPoint(double x_, std::vector<double> y_, std::vector<double> p_, std::vector<double> q_)
        : x(x_), y(std::move(y_)), p(std::move(p_)), q(std::move(q_)) {}

    int dim() const { return static_cast<int>(y.size()); }

    double value(Var v) const {
        auto pick = [&](const std::vector<double>& c) -> double {
            if (v.index < 1 || v.index > static_cast<int>(c.size()))
                throw IndexOutOfRange("jet point has no coordinate " + name(v));
            return c[static_cast<std::size_t>(v.index - 1)];
        };
        switch (v.kind) {
            case VarKind::X: return x;
            case VarKind::Y: return pick(y);
            case VarKind::P: return pick(p);
            case VarKind::Q: return pick(q);
        }
        return 0.0;
    }

    JetPoint shifted(Var v, double h) const {
        JetPoint out = *this;
        auto bump = [&](std::vector<double>& c) {
            if (v.index < 1 || v.index > static_cast<int>(c.size()))
                throw IndexOutOfRange("jet point has no coordinate " + name(v));
            c[static_cast<std::size_t>(v.index - 1)] += h;
        };
        switch (v.kind) {
            case VarKind::X: out.x += h; break;
            case VarKind::Y: bump(out.y); break;
            case VarKind::P: bump(out.p); break;
            case VarKind::Q: bump(out.q); break;
        }
        return out;
    }
};

}  // namespace jetcal
