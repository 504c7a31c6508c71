#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpp {

// Value in (-inf, +inf]. Cumulants and rate functions are genuinely
// extended-real, so +inf is a tagged state, never a sentinel double.
class ExtendedReal {
public:
    ExtendedReal() : value_(0.0), infinite_(false) {}
    ExtendedReal(double v) : value_(v), infinite_(false) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("ExtendedReal: finite constructor given a non-finite value");
        }
    }

    static ExtendedReal infinity() {
        ExtendedReal e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    // Finite payload; throws on +inf so infinities never leak as numbers.
    double finite_value() const {
        if (infinite_) throw std::logic_error("ExtendedReal: finite_value() called on +inf");
        return value_;
    }

    // IEEE rendering for printing and ordering.
    double as_double() const {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        return a.as_double() == b.as_double();
    }
    friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
        return a.as_double() < b.as_double();
    }
    friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
        return a.as_double() <= b.as_double();
    }

private:
    double value_;
    bool infinite_;
};

} // namespace fpp
