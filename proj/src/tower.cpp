#include "isochk/tower.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isochk/unipoly.hpp"

namespace isochk {

namespace {

void reduce_mod(std::vector<AlgNum>& r, const TowerLevel& level) {
    const auto& m = level.modulus.coeffs();
    const std::size_t deg = m.size() - 1;
    for (std::size_t k = r.size(); k-- > deg;) {
        if (r[k].is_zero()) continue;
        const AlgNum t = r[k];
        for (std::size_t j = 0; j < deg; ++j)
            if (!m[j].is_zero()) r[k - deg + j] -= t * m[j];
        r[k] = AlgNum();
    }
    if (r.size() > deg) r.resize(deg);
}

void check_same_level(const TowerLevel* a, const TowerLevel* b) {
    if (a != b) throw std::logic_error("mixing elements of unrelated tower levels");
}

}  // namespace

int AlgNum::level_index() const { return level_ ? level_->index : 0; }

bool AlgNum::is_one() const { return level_ == nullptr && base_.is_constant() && base_.constant_value().is_one(); }

AlgNum AlgNum::generator(const TowerLevel* level) {
    return from_poly(level, {AlgNum(), AlgNum(1)});
}

AlgNum AlgNum::from_poly(const TowerLevel* level, std::vector<AlgNum> coeffs) {
    if (!level) {
        if (coeffs.size() > 1) throw std::logic_error("polynomial over the base without a level");
        return coeffs.empty() ? AlgNum() : coeffs[0];
    }
    reduce_mod(coeffs, *level);
    AlgNum r;
    r.level_ = level;
    r.c_ = std::move(coeffs);
    r.normalize();
    return r;
}

void AlgNum::normalize() {
    if (!level_) return;
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    if (c_.size() <= 1) {
        AlgNum low = c_.empty() ? AlgNum() : std::move(c_[0]);
        *this = std::move(low);
    }
}

AlgNum& AlgNum::operator+=(const AlgNum& o) {
    const int la = level_index(), lb = o.level_index();
    if (la == 0 && lb == 0) {
        base_ += o.base_;
    } else if (la == lb) {
        check_same_level(level_, o.level_);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        normalize();
    } else if (la > lb) {
        c_[0] += o;
    } else {
        AlgNum r = o;
        r.c_[0] += *this;
        *this = std::move(r);
    }
    return *this;
}

AlgNum AlgNum::operator-() const {
    if (!level_) return AlgNum(-base_);
    AlgNum r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

AlgNum& AlgNum::operator-=(const AlgNum& o) { return *this += -o; }

AlgNum operator*(const AlgNum& a, const AlgNum& b) {
    const int la = a.level_index(), lb = b.level_index();
    if (la == 0 && lb == 0) return AlgNum(a.base_ * b.base_);
    if (a.is_zero() || b.is_zero()) return AlgNum();
    if (la == lb) {
        check_same_level(a.level_, b.level_);
        std::vector<AlgNum> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!b.c_[j].is_zero()) r[i + j] += a.c_[i] * b.c_[j];
        }
        return AlgNum::from_poly(a.level_, std::move(r));
    }
    const AlgNum& hi = la > lb ? a : b;
    const AlgNum& lo = la > lb ? b : a;
    AlgNum r = hi;
    for (auto& c : r.c_) c = c * lo;
    r.normalize();
    return r;
}

AlgNum& AlgNum::operator*=(const AlgNum& o) { return *this = *this * o; }

AlgNum AlgNum::inverse() const {
    if (!level_) return AlgNum(base_.inverse());
    auto x = poly_xgcd(AlgPoly(c_), level_->modulus);
    if (x.g.degree() > 0) throw Split(level_, x.g);
    return from_poly(level_, x.s.coeffs());
}

AlgNum AlgNum::pow(unsigned e) const {
    AlgNum result(1);
    AlgNum base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

std::string AlgNum::to_string() const {
    if (!level_) {
        std::string s = base_.to_string();
        return s;
    }
    std::string out;
    const std::string t = "t" + std::to_string(level_->index);
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j].is_zero()) continue;
        std::string coeff = c_[j].to_string();
        const bool simple = coeff.find_first_of(" +-/") == std::string::npos;
        std::string mono = j == 0 ? "" : (j == 1 ? t : t + "^" + std::to_string(j));
        std::string term;
        if (mono.empty())
            term = simple ? coeff : "(" + coeff + ")";
        else if (coeff == "1")
            term = mono;
        else
            term = (simple ? coeff : "(" + coeff + ")") + "*" + mono;
        out += (out.empty() ? "" : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

LevelPtr make_level(LevelPtr parent, LevelKind kind, AlgPoly modulus, int root_degree) {
    if (modulus.degree() < 1) throw std::logic_error("tower modulus must be nonconstant");
    if (!modulus.lc().is_one()) throw std::logic_error("tower modulus must be monic");
    auto lvl = std::make_shared<TowerLevel>();
    lvl->index = parent ? parent->index + 1 : 1;
    lvl->kind = kind;
    lvl->root_degree = root_degree;
    lvl->parent = std::move(parent);
    lvl->modulus = std::move(modulus);
    return lvl;
}

const TowerLevel* top_level(const AlgPoly& p) {
    const TowerLevel* top = nullptr;
    for (const auto& c : p.coeffs())
        if (c.level_index() > (top ? top->index : 0)) top = c.level();
    return top;
}

bool zero_or_unit(const AlgNum& a) {
    if (a.is_zero()) return true;
    if (a.is_base()) return false;
    (void)a.inverse();
    return false;
}

namespace {

const AlgNum& dtheta(const TowerLevel* level) {
    if (level->dtheta) return *level->dtheta;
    const auto& m = level->modulus.coeffs();
    std::vector<AlgNum> md, mp;
    bool h_free = true;
    for (std::size_t j = 0; j < m.size(); ++j) {
        AlgNum d = derivative_h(m[j]);
        if (!d.is_zero()) h_free = false;
        md.push_back(std::move(d));
        if (j > 0) mp.push_back(m[j] * AlgNum(static_cast<long>(j)));
    }
    AlgNum value;
    if (!h_free) value = -(AlgNum::from_poly(level, md) / AlgNum::from_poly(level, mp));
    level->dtheta = value;
    return *level->dtheta;
}

}  // namespace

AlgNum derivative_h(const AlgNum& a) {
    if (a.is_base()) return AlgNum(a.base().derivative());
    const TowerLevel* level = a.level();
    const auto& c = a.coeffs();
    std::vector<AlgNum> dc, dpoly;
    dc.reserve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        dc.push_back(derivative_h(c[j]));
        if (j > 0) dpoly.push_back(c[j] * AlgNum(static_cast<long>(j)));
    }
    AlgNum r = AlgNum::from_poly(level, std::move(dc));
    const AlgNum& dt = dtheta(level);
    if (!dt.is_zero()) r += AlgNum::from_poly(level, std::move(dpoly)) * dt;
    return r;
}

Complex evaluate(const AlgNum& a, const Embedding& e) {
    if (a.is_base()) return a.base().eval(e.h);
    const Complex t = e.theta.at(static_cast<std::size_t>(a.level_index()));
    Complex acc = 0;
    const auto& c = a.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + evaluate(c[k], e);
    return acc;
}

std::vector<const TowerLevel*> level_chain(const TowerLevel* top) {
    std::vector<const TowerLevel*> chain;
    for (const TowerLevel* l = top; l; l = l->parent.get()) chain.push_back(l);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

std::vector<Embedding> embeddings(const TowerLevel* top, Complex h, bool one_root_per_root_level,
                                  std::optional<Complex> direction) {
    const auto chain = level_chain(top);
    std::vector<Embedding> current{Embedding{h, std::vector<Complex>(chain.size() + 1)}};
    for (const TowerLevel* lvl : chain) {
        std::vector<Embedding> next;
        for (const auto& e : current) {
            std::vector<ComplexLD> coeffs;
            for (const auto& c : lvl->modulus.coeffs()) {
                Complex v = evaluate(c, e);
                coeffs.emplace_back(v.real(), v.imag());
            }
            auto roots = numeric_roots(coeffs);
            std::sort(roots.begin(), roots.end(), [](const ComplexLD& a, const ComplexLD& b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
            if (lvl->kind == LevelKind::Direction && direction) {
                long double best = -1;
                ComplexLD pick;
                for (const auto& r : roots) {
                    long double d = std::abs(r - ComplexLD(direction->real(), direction->imag()));
                    if (best < 0 || d < best) {
                        best = d;
                        pick = r;
                    }
                }
                if (best >= 0 && best <= 1e-6L * (1 + std::abs(pick))) {
                    Embedding n = e;
                    n.theta[static_cast<std::size_t>(lvl->index)] = Complex(static_cast<double>(pick.real()), static_cast<double>(pick.imag()));
                    next.push_back(std::move(n));
                }
                continue;
            }
            std::size_t count = roots.size();
            if (lvl->kind == LevelKind::Root && one_root_per_root_level) count = std::min<std::size_t>(count, 1);
            for (std::size_t k = 0; k < count; ++k) {
                Embedding n = e;
                n.theta[static_cast<std::size_t>(lvl->index)] = Complex(static_cast<double>(roots[k].real()), static_cast<double>(roots[k].imag()));
                next.push_back(std::move(n));
            }
        }
        current = std::move(next);
    }
    return current;
}

}  // namespace isochk
