// evolve.cpp — RK4 integrators for the Schrodinger and Lindblad equations.

#include "catgate/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

namespace catgate {

int default_workers() {
    if (const char* env = std::getenv("CATGATE_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::int64_t n, int n_threads, const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (n <= 0) return;
    const int workers = std::max<int>(1, std::min<std::int64_t>(n_threads, n));
    if (workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

void EvolutionConfig::validate() const {
    if (!(t_final > 0.0)) throw std::invalid_argument("EvolutionConfig: t_final must be positive");
    if (step < 0.0) throw std::invalid_argument("EvolutionConfig: negative step");
    if (!(resolution >= 1.0)) throw std::invalid_argument("EvolutionConfig: resolution must be >= 1");
    for (double rt : record_times)
        if (rt < 0.0 || rt > t_final + 1e-15 * t_final)
            throw std::invalid_argument("EvolutionConfig: record time outside [0, t_final]");
}

double EvolutionConfig::effective_step(const HamiltonianGenerator& gen) const {
    validate();
    const double wmax = gen.max_frequency();
    if (step > 0.0) {
        // A caller-chosen step must still resolve the fastest coefficient.
        if (wmax > 0.0 && step * wmax > kTwoPi / resolution * (1.0 + 1e-12))
            throw std::invalid_argument("EvolutionConfig: step too large for the fastest generator frequency");
        return std::min(step, t_final);
    }
    double h = t_final;
    if (wmax > 0.0) h = std::min(h, kTwoPi / (resolution * wmax));
    const double nb = gen.norm_bound();
    if (nb > 0.0) h = std::min(h, kTwoPi / (resolution * nb));
    return h;
}

namespace detail {

StepSchedule build_schedule(const EvolutionConfig& cfg, const HamiltonianGenerator& gen) {
    const double h_base = cfg.effective_step(gen);
    std::vector<double> marks = cfg.record_times;
    if (marks.empty()) marks.push_back(cfg.t_final);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    StepSchedule s;
    s.marks = marks;
    s.t.push_back(0.0);
    for (double mark : marks) {
        const double span = mark - s.t.back();
        if (span > 0.0) {
            const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(span / h_base - 1e-12)));
            const double start = s.t.back();
            for (std::int64_t k = 1; k < n; ++k) s.t.push_back(start + span * static_cast<double>(k) / static_cast<double>(n));
            s.t.push_back(mark);
        }
        s.mark_index.push_back(static_cast<std::int64_t>(s.t.size()) - 1);
    }
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Schrodinger
// ---------------------------------------------------------------------------

namespace detail {

SchrodingerStepperBuffers::SchrodingerStepperBuffers(std::int64_t dim)
    : k(dim), acc(dim), tmp(dim), h_x(dim) {}

void schrodinger_rhs(const HamiltonianGenerator& gen, const Eigen::VectorXd* decay_diag, double t,
                     const Vector& x, Vector& out, Vector& h_x) {
    gen.apply(t, x.data(), h_x.data());
    if (decay_diag) {
        const double* d = decay_diag->data();
        const Complex* xi = x.data();
        Complex* o = out.data();
        const Complex* hx = h_x.data();
        const std::int64_t n = x.size();
        for (std::int64_t i = 0; i < n; ++i)
            o[i] = Complex(0.0, -1.0) * hx[i] - 0.5 * d[i] * xi[i];
    } else {
        out = Complex(0.0, -1.0) * h_x;
    }
}

void schrodinger_rk4_step(const HamiltonianGenerator& gen, const Eigen::VectorXd* decay_diag,
                          double t, double h, Vector& x, SchrodingerStepperBuffers& b) {
    schrodinger_rhs(gen, decay_diag, t, x, b.k, b.h_x);
    b.acc = b.k;
    b.tmp = x + (0.5 * h) * b.k;
    schrodinger_rhs(gen, decay_diag, t + 0.5 * h, b.tmp, b.k, b.h_x);
    b.acc += 2.0 * b.k;
    b.tmp = x + (0.5 * h) * b.k;
    schrodinger_rhs(gen, decay_diag, t + 0.5 * h, b.tmp, b.k, b.h_x);
    b.acc += 2.0 * b.k;
    b.tmp = x + h * b.k;
    schrodinger_rhs(gen, decay_diag, t + h, b.tmp, b.k, b.h_x);
    b.acc += b.k;
    x += (h / 6.0) * b.acc;
}

}  // namespace detail

SchrodingerResult evolve_schrodinger(const HamiltonianGenerator& gen, const StateVector& psi0,
                                     const EvolutionConfig& cfg) {
    if (psi0.spec() != gen.spec()) throw std::invalid_argument("evolve_schrodinger: Hilbert-space mismatch");
    const auto sched = detail::build_schedule(cfg, gen);

    SchrodingerResult res;
    Vector x = psi0.amplitudes();
    detail::SchrodingerStepperBuffers buf(x.size());
    size_t next_mark = 0;
    for (std::int64_t k = 0; k <= sched.n_steps(); ++k) {
        while (next_mark < sched.mark_index.size() && sched.mark_index[next_mark] == k) {
            if (!x.allFinite()) throw std::runtime_error("evolve_schrodinger: non-finite amplitudes (instability)");
            res.states.emplace_back(gen.spec(), x);
            res.times.push_back(sched.marks[next_mark]);
            res.max_norm_drift = std::max(res.max_norm_drift, std::abs(x.norm() - 1.0));
            ++next_mark;
        }
        if (k < sched.n_steps())
            detail::schrodinger_rk4_step(gen, nullptr, sched.t[static_cast<size_t>(k)],
                                         sched.t[static_cast<size_t>(k + 1)] - sched.t[static_cast<size_t>(k)], x, buf);
    }
    return res;
}

StateVector frame_transform(const StateVector& psi, const Eigen::VectorXd& h0_diag, double t,
                            FrameDirection dir) {
    if (h0_diag.size() != psi.dim()) throw std::invalid_argument("frame_transform: spectrum length mismatch");
    const double sign = (dir == FrameDirection::ToInteraction) ? 1.0 : -1.0;
    Vector v = psi.amplitudes();
    for (std::int64_t i = 0; i < v.size(); ++i) v(i) *= std::polar(1.0, sign * h0_diag(i) * t);
    return StateVector(psi.spec(), std::move(v));
}

// ---------------------------------------------------------------------------
// Master equation
// ---------------------------------------------------------------------------

namespace {

struct MasterWork {
    const HamiltonianGenerator* gen = nullptr;
    const std::vector<CollapseChannel>* channels = nullptr;
    Eigen::VectorXd decay_diag;           // sum_c rate_c * diag(op^dag op)
    Matrix a, b;                          // H rho and its adjoint
    int n_threads = 1;

    void init(const HamiltonianGenerator& g, const std::vector<CollapseChannel>& ch, int threads) {
        gen = &g;
        channels = &ch;
        const std::int64_t d = g.spec().dim();
        decay_diag = Eigen::VectorXd::Zero(d);
        for (const auto& c : ch) decay_diag += c.rate * c.op.gram_diagonal();
        a.resize(d, d);
        b.resize(d, d);
        // thread spawning per stage costs more than it buys on small systems
        n_threads = (d >= 256) ? threads : 1;
    }

    /// out = -i [H(t), rho] + sum_c rate_c (O rho O^dag - 1/2 {O^dag O, rho})
    void rhs(double t, const Matrix& rho, Matrix& out) {
        const std::int64_t d = rho.rows();
        parallel_for(d, n_threads, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t j = lo; j < hi; ++j)
                gen->apply(t, rho.col(j).data(), a.col(j).data());
        });
        parallel_for(d, n_threads, [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t j = lo; j < hi; ++j) b.col(j) = a.row(j).adjoint();
        });
        parallel_for(d, n_threads, [&](std::int64_t lo, std::int64_t hi) {
            const Complex mi(0.0, -1.0);
            for (std::int64_t j = lo; j < hi; ++j) {
                Complex* o = out.col(j).data();
                const Complex* aj = a.col(j).data();
                const Complex* bj = b.col(j).data();
                const Complex* rj = rho.col(j).data();
                const double* dd = decay_diag.data();
                const double ddj = decay_diag(j);
                for (std::int64_t i = 0; i < d; ++i)
                    o[i] = mi * (aj[i] - bj[i]) - 0.5 * (dd[i] + ddj) * rj[i];
                for (const auto& c : *channels) {
                    const auto& op = c.op;
                    if (j < std::max<std::int64_t>(0, op.offset) || j >= std::min<std::int64_t>(d, d + op.offset))
                        continue;
                    const double wj = op.weight(j);
                    if (wj == 0.0) continue;
                    const Complex* src = rho.col(j - op.offset).data();
                    const double* w = op.weight.data();
                    const double f = c.rate * wj;
                    const std::int64_t lo_i = std::max<std::int64_t>(0, op.offset);
                    const std::int64_t hi_i = std::min<std::int64_t>(d, d + op.offset);
                    for (std::int64_t i = lo_i; i < hi_i; ++i) o[i] += f * w[i] * src[i - op.offset];
                }
            }
        });
    }
};

void symmetrize(Matrix& m) {
    const std::int64_t d = m.rows();
    for (std::int64_t j = 0; j < d; ++j) {
        m(j, j) = Complex(m(j, j).real(), 0.0);
        for (std::int64_t i = j + 1; i < d; ++i) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
}

}  // namespace

MasterResult evolve_master(const HamiltonianGenerator& gen, const std::vector<CollapseChannel>& channels,
                           const DensityMatrix& rho0, const EvolutionConfig& cfg, MasterOptions opts) {
    if (rho0.spec() != gen.spec()) throw std::invalid_argument("evolve_master: Hilbert-space mismatch");
    const std::int64_t d = gen.spec().dim();
    if (d > opts.dim_guard)
        throw std::invalid_argument("evolve_master: dimension exceeds the dense-rho guard");
    const auto sched = detail::build_schedule(cfg, gen);
    const int threads = opts.n_threads > 0 ? opts.n_threads : default_workers();

    MasterWork work;
    work.init(gen, channels, threads);

    Matrix rho = rho0.entries();
    Matrix k1(d, d), acc(d, d), tmp(d, d);
    MasterResult res;

    auto record = [&](double time) {
        if (!rho.allFinite()) throw std::runtime_error("evolve_master: non-finite entries (instability)");
        res.states.emplace_back(gen.spec(), rho, /*tol=*/1e-5);
        res.times.push_back(time);
        if (d <= opts.eigensolve_dim) {
            const double mineig = res.states.back().min_eigenvalue();
            res.min_eigenvalue.push_back(mineig);
            res.positivity_ok.push_back(mineig >= -opts.positivity_shift);
        } else {
            res.min_eigenvalue.push_back(std::numeric_limits<double>::quiet_NaN());
            res.positivity_ok.push_back(res.states.back().positive_within(opts.positivity_shift));
        }
    };

    size_t next_mark = 0;
    for (std::int64_t k = 0; k <= sched.n_steps(); ++k) {
        while (next_mark < sched.mark_index.size() && sched.mark_index[next_mark] == k) {
            record(sched.marks[next_mark]);
            ++next_mark;
        }
        if (k == sched.n_steps()) break;
        const double t = sched.t[static_cast<size_t>(k)];
        const double h = sched.t[static_cast<size_t>(k + 1)] - t;
        work.rhs(t, rho, k1);
        acc = k1;
        tmp = rho + (0.5 * h) * k1;
        work.rhs(t + 0.5 * h, tmp, k1);
        acc += 2.0 * k1;
        tmp = rho + (0.5 * h) * k1;
        work.rhs(t + 0.5 * h, tmp, k1);
        acc += 2.0 * k1;
        tmp = rho + h * k1;
        work.rhs(t + h, tmp, k1);
        acc += k1;
        rho += (h / 6.0) * acc;
        symmetrize(rho);
        res.max_trace_drift = std::max(res.max_trace_drift,
                                       std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag()));
    }
    return res;
}

}  // namespace catgate
