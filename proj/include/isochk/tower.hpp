#pragma once

#include <complex>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isochk/dense_poly.hpp"
#include "isochk/ratfunc.hpp"

namespace isochk {

struct TowerLevel;

/// Element of a tower K_L = K_{L-1}[t_L]/(M_L) over K_0 = Q(i)(h).
///
/// Each M_L is monic and squarefree but not necessarily irreducible, so K_L is a product of
/// fields. Inverting a zero divisor throws Split carrying a nontrivial factor of the modulus
/// (dynamic evaluation); the code that created the level decides how to continue.
/// Elements are stored reduced and at the lowest level that represents them, so structural
/// zero coincides with zero in K_L.
class AlgNum {
public:
    AlgNum() = default;
    AlgNum(long v) : base_(v) {}
    AlgNum(GaussianRational v) : base_(std::move(v)) {}
    AlgNum(RatFunc v) : base_(std::move(v)) {}

    /// The generator t_L of a level.
    static AlgNum generator(const TowerLevel* level);
    /// sum coeffs[j] t_L^j reduced modulo M_L.
    static AlgNum from_poly(const TowerLevel* level, std::vector<AlgNum> coeffs);

    const TowerLevel* level() const { return level_; }
    int level_index() const;
    bool is_base() const { return level_ == nullptr; }
    const RatFunc& base() const { return base_; }
    /// Coefficients in t_L (empty for base elements).
    const std::vector<AlgNum>& coeffs() const { return c_; }

    bool is_zero() const { return level_ == nullptr && base_.is_zero(); }
    bool is_one() const;
    /// Gaussian rational constant (level 0, independent of h).
    bool is_rational_constant() const { return level_ == nullptr && base_.is_constant(); }

    AlgNum& operator+=(const AlgNum& o);
    AlgNum& operator-=(const AlgNum& o);
    AlgNum& operator*=(const AlgNum& o);
    friend AlgNum operator+(AlgNum a, const AlgNum& b) { return a += b; }
    friend AlgNum operator-(AlgNum a, const AlgNum& b) { return a -= b; }
    friend AlgNum operator*(const AlgNum& a, const AlgNum& b);
    AlgNum operator-() const;
    /// Throws Split when the element is a zero divisor but not zero.
    AlgNum inverse() const;
    friend AlgNum operator/(const AlgNum& a, const AlgNum& b) { return a * b.inverse(); }
    AlgNum pow(unsigned e) const;

    std::string to_string() const;

private:
    void normalize();

    const TowerLevel* level_ = nullptr;
    RatFunc base_;
    std::vector<AlgNum> c_;
};

using AlgPoly = DensePoly<AlgNum>;

/// Thrown when a modulus turns out to factor: `factor` is a monic proper factor of level->modulus.
struct Split : std::exception {
    const TowerLevel* level;
    AlgPoly factor;
    Split(const TowerLevel* l, AlgPoly f) : level(l), factor(std::move(f)) {}
    const char* what() const noexcept override { return "tower level split"; }
};

enum class LevelKind { Direction, Tau, Root };

struct TowerLevel {
    int index = 0;
    LevelKind kind = LevelKind::Tau;
    int root_degree = 1;  // p for a Root level t^p - tau
    std::shared_ptr<const TowerLevel> parent;
    AlgPoly modulus;  // monic, coefficients below this level
    mutable std::optional<AlgNum> dtheta;
};

using LevelPtr = std::shared_ptr<const TowerLevel>;

LevelPtr make_level(LevelPtr parent, LevelKind kind, AlgPoly modulus, int root_degree = 1);

/// The highest level among the coefficients of a polynomial (nullptr when all are base).
const TowerLevel* top_level(const AlgPoly& p);

/// True if zero; false if a unit; throws Split otherwise.
bool zero_or_unit(const AlgNum& a);

/// Derivation d/dh extended to the tower.
AlgNum derivative_h(const AlgNum& a);

/// Numeric values of h and of every generator, indexed by level index (slot 0 unused).
struct Embedding {
    Complex h;
    std::vector<Complex> theta;
};

Complex evaluate(const AlgNum& a, const Embedding& e);

/// All embeddings of the chain ending at `top`. Root levels contribute only their first root
/// when `one_root_per_root_level` is set. When `direction` is given, the Direction level is
/// pinned to that value (no embedding if it is not a root of the level modulus).
std::vector<Embedding> embeddings(const TowerLevel* top, Complex h, bool one_root_per_root_level,
                                  std::optional<Complex> direction = std::nullopt);

/// Chain of levels from level 1 up to `top`.
std::vector<const TowerLevel*> level_chain(const TowerLevel* top);

}  // namespace isochk
