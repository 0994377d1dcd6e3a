#include "isochk/ratfunc.hpp"

#include <stdexcept>

namespace isochk {

namespace {
bool is_one(const UniPoly& p) { return p.degree() == 0 && p.lc().is_one(); }
}  // namespace

RatFunc::RatFunc(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
}

RatFunc RatFunc::h() { return RatFunc(UniPoly(std::vector<GaussianRational>{GaussianRational(0), GaussianRational(1)})); }

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = UniPoly(GaussianRational(1));
        return;
    }
    if (den_.degree() > 0) {
        UniPoly g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = divide_exact(num_, g);
            den_ = divide_exact(den_, g);
        }
    }
    if (!den_.lc().is_one()) {
        GaussianRational inv = den_.lc().inverse();
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (is_one(den_) && is_one(o.den_)) {
        num_ += o.num_;
        return *this;
    }
    if (den_ == o.den_) {
        num_ += o.num_;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ = den_ * o.den_;
    }
    normalize();
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    if (num_.is_zero()) return *this;
    if (o.num_.is_zero()) return *this = RatFunc();
    num_ = num_ * o.num_;
    if (is_one(den_) && is_one(o.den_)) return *this;
    den_ = den_ * o.den_;
    normalize();
    return *this;
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw std::domain_error("division by zero in Q(i)(h)");
    RatFunc r;
    r.num_ = den_;
    r.den_ = num_;
    r.normalize();
    return r;
}

RatFunc RatFunc::derivative() const {
    if (is_one(den_)) return RatFunc(num_.derivative());
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Complex RatFunc::eval(Complex h) const { return eval_complex(num_, h) / eval_complex(den_, h); }

std::string RatFunc::to_string() const {
    std::string n = format_unipoly(num_, "h");
    if (is_one(den_)) return n;
    return "(" + n + ")/(" + format_unipoly(den_, "h") + ")";
}

}  // namespace isochk
