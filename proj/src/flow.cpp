#include "isochk/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace isochk {

CompiledPoly::CompiledPoly(const BiPoly& p) {
    for (const auto& [e, c] : p.terms()) {
        terms_.push_back({e.first, e.second, c.to_complex()});
        max_x_ = std::max(max_x_, e.first);
        max_y_ = std::max(max_y_, e.second);
    }
}

CompiledPoly::CompiledPoly(const std::map<Exponent, Complex>& terms) {
    for (const auto& [e, c] : terms) {
        if (c == Complex(0)) continue;
        terms_.push_back({e.first, e.second, c});
        max_x_ = std::max(max_x_, e.first);
        max_y_ = std::max(max_y_, e.second);
    }
}

Complex CompiledPoly::operator()(Complex x, Complex y) const {
    Complex px[32], py[32];
    std::vector<Complex> bx, by;
    Complex* ax = px;
    Complex* ay = py;
    if (max_x_ >= 32) {
        bx.resize(static_cast<std::size_t>(max_x_) + 1);
        ax = bx.data();
    }
    if (max_y_ >= 32) {
        by.resize(static_cast<std::size_t>(max_y_) + 1);
        ay = by.data();
    }
    ax[0] = 1;
    ay[0] = 1;
    for (int k = 1; k <= max_x_; ++k) ax[k] = ax[k - 1] * x;
    for (int k = 1; k <= max_y_; ++k) ay[k] = ay[k - 1] * y;
    Complex s = 0;
    for (const auto& t : terms_) s += t.c * ax[t.i] * ay[t.j];
    return s;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using State = std::array<Complex, 2>;

State axpy(const State& a, Complex s, const State& b) { return {a[0] + s * b[0], a[1] + s * b[1]}; }

double norm(const State& z) { return std::sqrt(std::norm(z[0]) + std::norm(z[1])); }

// Hermitian product sum a_j conj(b_j).
Complex herm(const State& a, const State& b) { return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]); }

using NumPoly = std::map<Exponent, Complex>;

NumPoly numeric(const BiPoly& p) {
    NumPoly out;
    for (const auto& [e, c] : p.terms()) out[e] = c.to_complex();
    return out;
}

NumPoly derivative(const NumPoly& p, Var v) {
    NumPoly out;
    for (const auto& [e, c] : p) {
        const int k = v == Var::X ? e.first : e.second;
        if (k == 0) continue;
        out[v == Var::X ? Exponent{k - 1, e.second} : Exponent{e.first, k - 1}] += double(k) * c;
    }
    return out;
}

NumPoly homogeneous(const NumPoly& p, int k) {
    NumPoly out;
    for (const auto& [e, c] : p)
        if (e.first + e.second == k) out[e] = c;
    return out;
}

struct Hamiltonian {
    CompiledPoly H, Hx, Hy, H2;
    explicit Hamiltonian(const BiPoly& p) : Hamiltonian(numeric(p)) {}
    explicit Hamiltonian(const NumPoly& p)
        : H(p), Hx(derivative(p, Var::X)), Hy(derivative(p, Var::Y)), H2(homogeneous(p, 2)) {}
    State field(const State& z, Complex rate) const { return {-rate * Hy(z[0], z[1]), rate * Hx(z[0], z[1])}; }
    Complex value(const State& z) const { return H(z[0], z[1]); }
};

// Dormand-Prince 5(4) with the Hairer continuous extension.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

struct Step {
    double s0 = 0, s1 = 0;
    State z0, z1;
    std::array<State, 5> r;  // continuous extension
    State dense(double s) const {
        const double th = (s - s0) / (s1 - s0), th1 = 1 - th;
        State out;
        for (int c = 0; c < 2; ++c)
            out[c] = r[0][c] + th * (r[1][c] + th1 * (r[2][c] + th * (r[3][c] + th1 * r[4][c])));
        return out;
    }
};

// Integrates dz/ds = rate * V(z) for s in [0, s_end]. `on_step` returns false to stop.
template <class OnStep>
StopReason drive(const Hamiltonian& ham, Complex rate, const State& start, double s_end, const FlowOptions& opts,
                 long& steps, OnStep&& on_step, double rtol, double atol) {
    State z = start;
    double s = 0;
    State k1 = ham.field(z, rate);
    const double fn = norm(k1);
    double h = fn > 0 ? std::min(0.1, 0.01 * std::max(norm(z), 1e-3) / fn) : 0.1;
    h = std::max(h, 1e-6);
    bool last_rejected = false;
    while (s < s_end) {
        if (steps >= opts.max_steps) return StopReason::MaxSteps;
        if (h < opts.min_step) return StopReason::StepUnderflow;
        const double hs = std::min(h, s_end - s);
        const Complex hc = hs;
        const State k2 = ham.field(axpy(z, hc * a21, k1), rate);
        const State y3{z[0] + hc * (a31 * k1[0] + a32 * k2[0]), z[1] + hc * (a31 * k1[1] + a32 * k2[1])};
        const State k3 = ham.field(y3, rate);
        const State y4{z[0] + hc * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
                       z[1] + hc * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])};
        const State k4 = ham.field(y4, rate);
        const State y5{z[0] + hc * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
                       z[1] + hc * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])};
        const State k5 = ham.field(y5, rate);
        const State y6{z[0] + hc * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
                       z[1] + hc * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])};
        const State k6 = ham.field(y6, rate);
        const State y7{z[0] + hc * (a71 * k1[0] + a73 * k3[0] + a74 * k4[0] + a75 * k5[0] + a76 * k6[0]),
                       z[1] + hc * (a71 * k1[1] + a73 * k3[1] + a74 * k4[1] + a75 * k5[1] + a76 * k6[1])};
        const State k7 = ham.field(y7, rate);
        double err = 0;
        for (int c = 0; c < 2; ++c) {
            const Complex e = hc * (e1 * k1[c] + e3 * k3[c] + e4 * k4[c] + e5 * k5[c] + e6 * k6[c] + e7 * k7[c]);
            const double sr = atol + rtol * std::max(std::abs(z[c].real()), std::abs(y7[c].real()));
            const double si = atol + rtol * std::max(std::abs(z[c].imag()), std::abs(y7[c].imag()));
            err += (e.real() / sr) * (e.real() / sr) + (e.imag() / si) * (e.imag() / si);
        }
        err = std::sqrt(err / 4);
        if (!std::isfinite(err)) {
            h *= 0.2;
            last_rejected = true;
            continue;
        }
        if (err > 1) {
            h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
            continue;
        }
        ++steps;
        Step st;
        st.s0 = s;
        st.s1 = s + hs;
        st.z0 = z;
        st.z1 = y7;
        for (int c = 0; c < 2; ++c) {
            const Complex ydiff = y7[c] - z[c];
            const Complex bspl = hc * k1[c] - ydiff;
            st.r[0][c] = z[c];
            st.r[1][c] = ydiff;
            st.r[2][c] = bspl;
            st.r[3][c] = ydiff - hc * k7[c] - bspl;
            st.r[4][c] = hc * (d1 * k1[c] + d3 * k3[c] + d4 * k4[c] + d5 * k5[c] + d6 * k6[c] + d7 * k7[c]);
        }
        s = st.s1;
        z = y7;
        k1 = k7;
        double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        grow = std::min(5.0, std::max(0.2, grow));
        if (last_rejected) grow = std::min(grow, 1.0);
        h = hs * grow;
        last_rejected = false;
        if (norm(z) > opts.escape_radius) {
            on_step(st);
            return StopReason::Escaped;
        }
        if (!on_step(st)) return StopReason::Completed;
    }
    return StopReason::Completed;
}

// Illinois regula falsi for a sign change of f on [a, b].
template <class F>
double find_root(F&& f, double a, double b, double fa, double fb) {
    int side = 0;
    for (int it = 0; it < 100; ++it) {
        const double c = (a * fb - b * fa) / (fb - fa);
        const double fc = f(c);
        if (fc == 0 || std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(c))) return c;
        if ((fc > 0) == (fb > 0)) {
            b = c;
            fb = fc;
            if (side == -1) fa /= 2;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb /= 2;
            side = 1;
        }
    }
    return (a * fb - b * fa) / (fb - fa);
}

}  // namespace

namespace {

FlowState initial_point(const Hamiltonian& ham, Complex h, double theta) {
    if (std::abs(h) == 0) throw std::invalid_argument("degenerate level: h = 0 passes through the singular point");
    const Complex ct(std::cos(theta), 0), st(std::sin(theta), 0);
    const Complex q = ham.H2(ct, st);
    if (std::abs(q) < 1e-12) throw std::runtime_error("cannot land on level curve: quadratic part vanishes along the start direction");
    const Complex r = std::sqrt(h / q);
    Complex x = r * ct, y = r * st;
    const double tol = 1e-13 * (1 + std::abs(h));
    const Complex gx = ham.Hx(x, y), gy = ham.Hy(x, y);
    const bool along_y = std::abs(gy) >= 0.1 * std::abs(gx);
    for (int it = 0; it < 50; ++it) {
        const Complex g = ham.H(x, y) - h;
        if (std::abs(g) <= tol) return FlowState{x, y, 0};
        const Complex d = along_y ? ham.Hy(x, y) : ham.Hx(x, y);
        if (std::abs(d) == 0) break;
        (along_y ? y : x) -= g / d;
    }
    if (std::abs(ham.H(x, y) - h) <= tol) return FlowState{x, y, 0};
    throw std::runtime_error("cannot land on level curve");
}

}  // namespace

FlowState initial_point_on_level(const BiPoly& H, Complex h, double theta) {
    return initial_point(Hamiltonian(H), h, theta);
}

Trajectory integrate(const BiPoly& H, Field field, const FlowState& z0, double t_end, const FlowOptions& opts) {
    const Hamiltonian ham(H);
    const double dir = t_end < 0 ? -1.0 : 1.0;
    const Complex rate = (field == Field::V ? Complex(1, 0) : Complex(0, 1)) * dir;
    const Complex h0 = ham.value({z0.x, z0.y});
    Trajectory tr;
    tr.states.push_back(z0);
    tr.stop = drive(
        ham, rate, {z0.x, z0.y}, std::abs(t_end), opts, tr.steps,
        [&](const Step& st) {
            tr.states.push_back({st.z1[0], st.z1[1], z0.t + dir * st.s1});
            tr.drift = std::max(tr.drift, std::abs(ham.value(st.z1) - h0));
            return true;
        },
        opts.rtol, opts.atol);
    return tr;
}

namespace {

State operator-(const State& a, const State& b) { return {a[0] - b[0], a[1] - b[1]}; }

// Flow for the complex time tau along a straight path.
State flow_for(const Hamiltonian& ham, const State& z, Complex tau, const FlowOptions& opts) {
    State moved = z;
    long extra = 0;
    drive(
        ham, tau, z, 1.0, opts, extra,
        [&](const Step& st) {
            moved = st.z1;
            return true;
        },
        1e-13, 1e-15);
    return moved;
}

// Newton in complex time: moves z along its leaf towards `target`, adding the elapsed time to T.
State close_in_time(const Hamiltonian& ham, State z, const State& target, Complex& T, const FlowOptions& opts) {
    for (int it = 0; it < 8; ++it) {
        const State v = ham.field(z, 1.0);
        const Complex delta = herm(target - z, v) / herm(v, v).real();
        if (std::abs(delta) < 1e-15 * std::max(std::abs(T), 1e-3)) break;
        z = flow_for(ham, z, delta, opts);
        T += delta;
    }
    return z;
}

// One return along the complex time direction of `predicted`: integrate u V with u = predicted/|predicted|,
// cut the orbit with the section through the start, then close it exactly in complex time.
PeriodSample single_period(const Hamiltonian& ham, Complex h, Complex predicted, const FlowOptions& opts) {
    const FlowState p = initial_point(ham, h, 0.0);
    const State z0{p.x, p.y};
    const Complex u = predicted / std::abs(predicted);
    const State v0 = ham.field(z0, u);
    const double radius = opts.return_radius > 0 ? opts.return_radius : 0.1 * norm(z0);
    const double t_max = opts.t_max > 0 ? opts.t_max : 50 * kTwoPi;
    const double cons = opts.conservation_tol * (1 + std::abs(h));
    auto sigma = [&](const State& z) { return herm(z - z0, v0).real(); };

    PeriodSample out;
    out.h = h;
    bool found = false, lost = false;
    double sc = 0;
    State zc{};
    const StopReason stop = drive(
        ham, u, z0, t_max, opts, out.steps,
        [&](const Step& st) {
            out.drift = std::max(out.drift, std::abs(ham.value(st.z1) - h));
            if (out.drift > cons) {
                lost = true;
                return false;
            }
            const double f0 = sigma(st.z0), f1 = sigma(st.z1);
            if (!(f0 < 0 && f1 >= 0)) return true;
            const double s = find_root([&](double w) { return sigma(st.dense(w)); }, st.s0, st.s1, f0, f1);
            const State z = st.dense(s);
            if (norm(z - z0) >= radius) return true;
            sc = s;
            zc = z;
            found = true;
            return false;
        },
        opts.rtol, opts.atol);
    if (!found) {
        if (stop == StopReason::Escaped) throw std::runtime_error("no return detected: orbit escaped");
        if (lost) throw std::runtime_error("conservation lost");
        if (stop == StopReason::StepUnderflow) throw std::runtime_error("no return detected: step size underflow");
        throw std::runtime_error("no return detected");
    }
    out.T = u * sc;
    if (norm(close_in_time(ham, zc, z0, out.T, opts) - z0) > 1e-6 * norm(z0))
        throw std::runtime_error("no return detected: return map did not close");
    return out;
}

// Period of the linearization, 2 pi / d with d^2 = det Hess; the branch with Re d >= 0.
Complex linear_period(const BiPoly& H) {
    const Complex a = H.coeff(2, 0).to_complex(), b = H.coeff(1, 1).to_complex(), c = H.coeff(0, 2).to_complex();
    const Complex d = std::sqrt(4.0 * a * c - b * b);
    if (std::abs(d) < 1e-300) throw std::invalid_argument("not a Morse point: degenerate quadratic part");
    return kTwoPi / d;
}

constexpr double kSeedLevel = 2e-4;
constexpr double kSmallestSeed = 1e-8;
constexpr double kContinuationRatio = 1.6;
constexpr int kLoopPoints = 128;
constexpr int kMaxLoopMoves = 2000;
constexpr std::size_t kMaxLoopPoints = 4096;

// Least-norm Newton onto H = h.
bool project_point(const Hamiltonian& ham, State& z, Complex h) {
    for (int it = 0; it < 10; ++it) {
        const Complex g = ham.value(z) - h;
        if (std::abs(g) <= 1e-14 * (1 + std::abs(h))) return true;
        const State grad{ham.Hx(z[0], z[1]), ham.Hy(z[0], z[1])};
        const double gg = herm(grad, grad).real();
        if (gg == 0) return false;
        z[0] -= g * std::conj(grad[0]) / gg;
        z[1] -= g * std::conj(grad[1]) / gg;
    }
    return std::abs(ham.value(z) - h) <= 1e-14 * (1 + std::abs(h));
}

// Moves every loop point onto H = h. False if a point does not converge or moves by more than a
// quarter of the local spacing, which would risk a jump between sheets.
bool project_loop(const Hamiltonian& ham, std::vector<State>& loop, Complex h) {
    const std::size_t n = loop.size();
    std::vector<State> next(loop);
    for (std::size_t j = 0; j < n; ++j) {
        if (!project_point(ham, next[j], h)) return false;
        const double spacing = std::min(norm(loop[(j + 1) % n] - loop[j]), norm(loop[(j + n - 1) % n] - loop[j]));
        if (norm(next[j] - loop[j]) > 0.25 * spacing) return false;
    }
    loop = std::move(next);
    return true;
}

// Inserts a midpoint into segment j: half way in complex time when the hop between the ends
// closes, else the chord midpoint pulled back onto the level.
bool split_segment(const Hamiltonian& ham, std::vector<State>& loop, std::size_t j, Complex h,
                   const FlowOptions& opts) {
    const State a = loop[j];
    const State b = loop[(j + 1) % loop.size()];
    Complex dt = 0;
    State z;
    if (norm(close_in_time(ham, a, b, dt, opts) - b) <= 1e-9 * norm(b)) {
        z = flow_for(ham, a, dt / 2.0, opts);
    } else {
        const State mid{(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0};
        z = mid;
        if (!project_point(ham, z, h) || norm(z - mid) > 0.25 * norm(b - a)) return false;
    }
    loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(j + 1), z);
    return true;
}

// Splits segments that are more than twice the median length or visibly bent (the chord midpoint
// sits off the curve), so neighbours stay close along the curve.
bool split_long_segments(const Hamiltonian& ham, std::vector<State>& loop, Complex h, const FlowOptions& opts) {
    std::vector<double> len(loop.size());
    for (std::size_t j = 0; j < loop.size(); ++j) len[j] = norm(loop[(j + 1) % loop.size()] - loop[j]);
    std::vector<double> sorted = len;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double limit = 2 * sorted[sorted.size() / 2];
    for (std::size_t j = len.size(); j-- > 0;) {
        const State& a = loop[j];
        const State& b = loop[(j + 1) % loop.size()];
        const State mid{(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0};
        State z = mid;
        const bool bent = !project_point(ham, z, h) || norm(z - mid) > 0.05 * len[j];
        if (len[j] > limit || bent) {
            if (loop.size() >= kMaxLoopPoints || !split_segment(ham, loop, j, h, opts)) return false;
        }
    }
    return true;
}

// Fallback for levels where the straight path in the time plane runs into a singularity of the flow:
// the cycle is carried as a closed chain of points from the seed level to h, and T is the sum of the
// complex times between neighbours.
PeriodSample loop_period(const Hamiltonian& ham, Complex h, double seed_level, Complex seed_T,
                         const FlowOptions& opts) {
    const Complex ray = h / std::abs(h);
    const FlowState p = initial_point(ham, ray * seed_level, 0.0);
    std::vector<State> loop;
    loop.reserve(kLoopPoints);
    long steps = 0;
    std::size_t next = 0;
    State z{p.x, p.y};
    drive(
        ham, seed_T, z, 1.0, opts, steps,
        [&](const Step& st) {
            while (next < kLoopPoints && double(next) / kLoopPoints <= st.s1) {
                loop.push_back(next == 0 ? st.z0 : st.dense(double(next) / kLoopPoints));
                ++next;
            }
            return true;
        },
        1e-12, 1e-14);
    if (loop.size() != kLoopPoints) throw std::runtime_error("no return detected: seed cycle incomplete");

    double level = seed_level, dl = seed_level;
    const double target = std::abs(h);
    for (int moves = 0; level < target; ++moves) {
        if (moves == kMaxLoopMoves) throw std::runtime_error("no return detected: cycle continuation stalled");
        const double trial = std::min(target, level + dl);
        // near the center the cycle scales like sqrt(h); Newton only corrects the remainder
        const double grow = std::sqrt(trial / level);
        std::vector<State> moved = loop;
        for (State& z : moved) z = {z[0] * grow, z[1] * grow};
        if (!project_loop(ham, moved, ray * trial) || !split_long_segments(ham, moved, ray * trial, opts)) {
            dl /= 2;
            if (dl < 1e-6 * target) throw std::runtime_error("no return detected: cycle continuation stalled");
            continue;
        }
        loop = std::move(moved);
        level = trial;
        dl *= 1.5;
    }

    PeriodSample out;
    out.h = h;
    out.steps = steps;
    const double cons = opts.conservation_tol * (1 + std::abs(h));
    while (true) {
        Complex T = 0;
        double drift = 0;
        bool closed = true;
        std::size_t j = 0;
        for (; j < loop.size() && closed; ++j) {
            const State& a = loop[j];
            const State& b = loop[(j + 1) % loop.size()];
            Complex dt = 0;
            const State end = close_in_time(ham, a, b, dt, opts);
            closed = norm(end - b) <= 1e-9 * norm(b);
            drift = std::max(drift, std::abs(ham.value(end) - h));
            T += dt;
        }
        if (closed) {
            if (drift > cons) throw std::runtime_error("conservation lost");
            out.T = T;
            out.drift = drift;
            return out;
        }
        if (loop.size() >= kMaxLoopPoints || !split_segment(ham, loop, j - 1, h, opts))
            throw std::runtime_error("no return detected: cycle chain did not close");
    }
}

// det-1 linear change z = M w with M^T A M = s^2 I and M as well conditioned as the Hessian A allows
using Mat2 = std::array<Complex, 4>;

Mat2 circularizing_map(const Mat2& A) {
    const double a00 = std::norm(A[0]) + std::norm(A[2]), a11 = std::norm(A[1]) + std::norm(A[3]);
    const Complex a01 = std::conj(A[0]) * A[1] + std::conj(A[2]) * A[3];  // entries of A^H A
    const double mean = 0.5 * (a00 + a11), half_gap = std::hypot(0.5 * (a00 - a11), std::abs(a01));
    Mat2 V;
    if (half_gap > 1e-6 * mean) {
        // right singular vectors; for symmetric A they also diagonalize A by congruence
        const double top = mean + half_gap;
        Complex v0 = a01, v1 = top - a00;
        if (std::abs(top - a11) > std::abs(v1)) v0 = top - a11, v1 = std::conj(a01);
        const double n = std::hypot(std::abs(v0), std::abs(v1));
        v0 /= n, v1 /= n;
        V = {v0, -std::conj(v1), v1, std::conj(v0)};
    } else {
        // A is a multiple of a symmetric unitary; its real and imaginary parts commute
        const double c = 0.7390851332151607;
        const double r00 = A[0].real() + c * A[0].imag(), r01 = A[1].real() + c * A[1].imag(),
                     r11 = A[3].real() + c * A[3].imag();
        const double th = 0.5 * std::atan2(2 * r01, r00 - r11);
        V = {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)};
    }
    auto congruence = [&](int i, int j) {
        return V[i] * (A[0] * V[j] + A[1] * V[2 + j]) + V[2 + i] * (A[2] * V[j] + A[3] * V[2 + j]);
    };
    const Complex d0 = congruence(0, 0), d1 = congruence(1, 1), off = congruence(0, 1);
    if (std::abs(off) > 1e-9 * (std::abs(d0) + std::abs(d1)) || d0 == Complex(0) || d1 == Complex(0))
        return {1, 0, 0, 1};
    const Complex e0 = 1.0 / std::sqrt(d0), e1 = 1.0 / std::sqrt(d1);
    Mat2 M{V[0] * e0, V[1] * e1, V[2] * e0, V[3] * e1};
    const Complex s = 1.0 / std::sqrt(M[0] * M[3] - M[1] * M[2]);
    for (auto& m : M) m *= s;
    return M;
}

NumPoly compose_linear(const NumPoly& p, const Mat2& M) {
    int deg = 0;
    for (const auto& [e, c] : p) deg = std::max(deg, e.first + e.second);
    // powers of the linear forms x = M0 u + M1 v and y = M2 u + M3 v
    auto powers = [&](Complex a, Complex b) {
        std::vector<NumPoly> out{NumPoly{{{0, 0}, 1}}};
        for (int k = 1; k <= deg; ++k) {
            NumPoly next;
            for (const auto& [e, c] : out.back()) {
                next[{e.first + 1, e.second}] += c * a;
                next[{e.first, e.second + 1}] += c * b;
            }
            out.push_back(std::move(next));
        }
        return out;
    };
    const auto xp = powers(M[0], M[1]), yp = powers(M[2], M[3]);
    NumPoly out;
    for (const auto& [e, c] : p)
        for (const auto& [ex, cx] : xp[e.first])
            for (const auto& [ey, cy] : yp[e.second]) out[{ex.first + ey.first, ex.second + ey.second}] += c * cx * cy;
    return out;
}

// The period is unchanged by det-1 linear maps; tracking runs where the quadratic part is circular.
Hamiltonian conditioned(const BiPoly& H) {
    const GaussianRational a = H.coeff(2, 0), b = H.coeff(1, 1), c = H.coeff(0, 2);
    if (b == GaussianRational(0) && a == c) return Hamiltonian(H);
    const Complex ad = a.to_complex(), bd = b.to_complex(), cd = c.to_complex();
    return Hamiltonian(compose_linear(numeric(H), circularizing_map({2.0 * ad, bd, bd, 2.0 * cd})));
}

}  // namespace

PeriodSample period(const BiPoly& H, Complex h, const FlowOptions& opts) {
    if (std::abs(h) > opts.h_max)
        throw std::invalid_argument("|h| exceeds the tracked range of the vanishing cycle");
    if (std::abs(h) == 0) throw std::invalid_argument("degenerate level: h = 0 passes through the singular point");
    const Hamiltonian ham = conditioned(H);
    const Complex T0 = linear_period(H);
    const Complex ray = h / std::abs(h);

    // seed close enough to 0 that the linear period fixes the time direction
    double seed_level = std::min(kSeedLevel, std::abs(h));
    PeriodSample seed;
    for (;; seed_level /= 10) {
        try {
            seed = single_period(ham, ray * seed_level, T0, opts);
            if (std::abs(seed.T - T0) <= 0.25 * std::abs(T0)) break;
            if (seed_level < kSmallestSeed) throw std::runtime_error("no return detected: period far from the linear one");
        } catch (const std::runtime_error&) {
            if (seed_level < kSmallestSeed) throw;
        }
    }
    if (seed_level == std::abs(h)) {
        seed.h = h;
        return seed;
    }

    // continue T along the ray so the time direction tracks arg T
    std::vector<double> r{0.0, seed_level};
    std::vector<Complex> T{T0, seed.T};
    double level = seed_level * kContinuationRatio;
    while (true) {
        const bool last = level >= std::abs(h);
        const double rl = last ? std::abs(h) : level;
        // Lagrange extrapolation from the last three levels
        const std::size_t m = std::min<std::size_t>(3, r.size());
        Complex pred = 0;
        for (std::size_t i = r.size() - m; i < r.size(); ++i) {
            Complex w = 1;
            for (std::size_t j = r.size() - m; j < r.size(); ++j)
                if (j != i) w *= (rl - r[j]) / (r[i] - r[j]);
            pred += w * T[i];
        }
        PeriodSample s;
        try {
            s = single_period(ham, last ? h : ray * rl, pred, opts);
            if (std::abs(s.T - pred) > 0.25 * std::abs(pred))
                throw std::runtime_error("no return detected: continuation along the ray lost the cycle");
        } catch (const std::runtime_error&) {
            return loop_period(ham, h, seed_level, seed.T, opts);
        }
        if (last) return s;
        r.push_back(rl);
        T.push_back(s.T);
        level *= kContinuationRatio;
    }
}

const char* to_string(NumericVerdict v) {
    switch (v) {
        case NumericVerdict::Isochronous: return "numerically_isochronous";
        case NumericVerdict::NonIsochronous: return "numerically_non_isochronous";
        case NumericVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<Complex> default_h_set(int count, double h_min, double h_max, const std::vector<double>& rays_deg) {
    if (count < 1) throw std::invalid_argument("sample count must be positive");
    if (!(h_min > 0) || !(h_max >= h_min)) throw std::invalid_argument("need 0 < h_min <= h_max");
    std::vector<Complex> out;
    for (double ray : rays_deg) {
        const Complex u = std::polar(1.0, ray * kTwoPi / 360.0);
        for (int k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
            out.push_back(u * std::exp(std::log(h_min) + f * (std::log(h_max) - std::log(h_min))));
        }
    }
    return out;
}

int default_thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ISOCHK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) n = v;
    }
    return std::max(1, n);
}

SampleSet sample_periods(const BiPoly& H, const std::vector<Complex>& hs, const FlowOptions& opts, double iso_tol,
                         int threads) {
    SampleSet out;
    out.h = hs;
    out.samples.resize(hs.size());
    out.errors.resize(hs.size());
    const int workers = std::max(1, std::min<int>(threads > 0 ? threads : default_thread_count(), static_cast<int>(hs.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < hs.size(); i = next++) {
            try {
                out.samples[i] = period(H, hs[i], opts);
            } catch (const std::exception& e) {
                out.errors[i] = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::vector<Complex> ok;
    for (const auto& s : out.samples)
        if (s) ok.push_back(s->T);
    if (ok.size() >= 2) {
        Complex mean = 0;
        for (Complex t : ok) mean += t;
        mean /= static_cast<double>(ok.size());
        double dev = 0;
        for (std::size_t i = 0; i < ok.size(); ++i)
            for (std::size_t j = i + 1; j < ok.size(); ++j) dev = std::max(dev, std::abs(ok[i] - ok[j]));
        out.max_deviation = dev / std::abs(mean);
    }
    // a failed sample only blocks the positive verdict: a spread among the good ones is already decisive
    if (ok.size() < 2)
        out.verdict = NumericVerdict::Inconclusive;
    else if (out.max_deviation >= iso_tol)
        out.verdict = NumericVerdict::NonIsochronous;
    else
        out.verdict = ok.size() == hs.size() ? NumericVerdict::Isochronous : NumericVerdict::Inconclusive;
    return out;
}

const char* to_string(EscapeOutcome o) {
    switch (o) {
        case EscapeOutcome::Escaped: return "escaped";
        case EscapeOutcome::FiniteTimeBlowup: return "finite_time_blowup";
        case EscapeOutcome::MaxTimeReached: return "max_time_reached";
    }
    return "max_time_reached";
}

double projective_distance(Complex x, Complex y, Complex bx, Complex by) {
    const double n = std::sqrt(std::norm(x) + std::norm(y)) * std::sqrt(std::norm(bx) + std::norm(by));
    if (n == 0) return 1.0;
    return std::min(1.0, std::abs(x * by - y * bx) / n);
}

std::vector<EscapeResult> escape_analysis(const BiPoly& H, Complex h, int n_starts, const FlowOptions& opts,
                                          double t_max) {
    const Hamiltonian ham(H);
    const auto points = infinity_points(H);
    std::vector<EscapeResult> out;
    for (int j = 0; j < n_starts; ++j) {
        const double theta = kTwoPi * j / n_starts;
        const FlowState p = initial_point_on_level(H, h, theta);
        for (int back = 0; back < 2; ++back) {
            EscapeResult r;
            r.start = p;
            r.backward = back == 1;
            const Complex rate = back ? Complex(0, -1) : Complex(0, 1);
            long steps = 0;
            State last{p.x, p.y};
            double s_last = 0;
            const StopReason stop = drive(
                ham, rate, {p.x, p.y}, t_max, opts, steps,
                [&](const Step& st) {
                    last = st.z1;
                    s_last = st.s1;
                    return true;
                },
                opts.rtol, opts.atol);
            r.t = back ? -s_last : s_last;
            if (stop == StopReason::StepUnderflow) {
                r.outcome = EscapeOutcome::FiniteTimeBlowup;
                r.t_blowup_est = r.t;
            } else if (stop == StopReason::Escaped) {
                const double m = std::max(std::abs(last[0]), std::abs(last[1]));
                r.dir_x = last[0] / m;
                r.dir_y = last[1] / m;
                // keep going: power-law blow-up reaches the outer radius almost at once
                FlowOptions outer = opts;
                outer.escape_radius = opts.blowup_radius;
                long more = 0;
                double s_more = 0;
                const StopReason s2 = drive(
                    ham, rate, last, std::min(50.0, std::max(0.0, t_max - s_last)), outer, more,
                    [&](const Step& st) {
                        s_more = st.s1;
                        return true;
                    },
                    opts.rtol, opts.atol);
                const bool fast = (s2 == StopReason::Escaped && s_more < 1.0) || s2 == StopReason::StepUnderflow;
                r.outcome = fast ? EscapeOutcome::FiniteTimeBlowup : EscapeOutcome::Escaped;
                if (fast) r.t_blowup_est = back ? -(s_last + s_more) : s_last + s_more;
                double best = 2;
                for (const auto& pt : points) {
                    const double d = projective_distance(r.dir_x, r.dir_y, pt.beta, pt.alpha);
                    if (d < best) {
                        best = d;
                        r.matched_point = pt.index;
                    }
                }
                r.match_distance = best;
            } else {
                r.outcome = EscapeOutcome::MaxTimeReached;
            }
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace isochk
