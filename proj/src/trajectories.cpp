// trajectories.cpp — Monte-Carlo wavefunction solver with a shared no-jump
// segment, checkpointed resumes, and norm-bisection jump location.

#include "catgate/trajectories.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "catgate/rng.hpp"

namespace catgate {

namespace {

struct SharedSegment {
    detail::StepSchedule sched;
    std::vector<double> norm2;          // squared norm at every boundary (no-jump path)
    std::vector<Vector> checkpoints;    // state at boundaries 0, C, 2C, ...
    int checkpoint_interval = 128;
    std::vector<Vector> record_states;  // raw no-jump states at the record boundaries

    const Vector& checkpoint_for(std::int64_t step, std::int64_t* cp_step) const {
        const std::int64_t c = step / checkpoint_interval;
        *cp_step = c * checkpoint_interval;
        return checkpoints[static_cast<size_t>(c)];
    }
};

struct TrajWorker {
    const HamiltonianGenerator* gen;
    const std::vector<CollapseChannel>* channels;
    const Eigen::VectorXd* decay;
    const SharedSegment* shared;
    detail::SchrodingerStepperBuffers buf;
    Vector psi, step_start, probe, jump_tmp;
    double jump_tol;
    int max_bisections;

    TrajWorker(const HamiltonianGenerator& g, const std::vector<CollapseChannel>& ch,
               const Eigen::VectorXd& d, const SharedSegment& sh, const TrajectoryConfig& tc)
        : gen(&g), channels(&ch), decay(&d), shared(&sh), buf(g.spec().dim()),
          psi(g.spec().dim()), step_start(g.spec().dim()), probe(g.spec().dim()),
          jump_tmp(g.spec().dim()), jump_tol(tc.jump_tol), max_bisections(tc.max_bisections) {}

    void step(double t, double h, Vector& x) {
        detail::schrodinger_rk4_step(*gen, decay, t, h, x, buf);
    }

    /// Locate the norm-threshold crossing inside (t0, t0+h] by bisection on
    /// single RK4 steps from `from`; leaves the pre-jump state in `psi`.
    double bisect_jump(const Vector& from, double t0, double h, double r) {
        double lo = 0.0, hi = h;
        psi = from;
        step(t0, hi, psi);
        for (int it = 0; it < max_bisections && (hi - lo) > 1e-15 * h; ++it) {
            const double n2 = psi.squaredNorm();
            if (std::abs(n2 - r) <= jump_tol * r) break;
            const double mid = 0.5 * (lo + hi);
            probe = from;
            step(t0, mid, probe);
            if (probe.squaredNorm() < r) {
                hi = mid;
                psi.swap(probe);
            } else {
                lo = mid;
            }
        }
        return t0 + hi;
    }

    /// Apply one quantum jump at the current (unnormalized) state; returns false
    /// when every channel weight vanishes.
    bool apply_jump(RandomStream& stream) {
        double total = 0.0;
        std::vector<double> w(channels->size());
        for (size_t c = 0; c < channels->size(); ++c) {
            jump_tmp.setZero();
            (*channels)[c].op.apply(1.0, psi.data(), jump_tmp.data());
            w[c] = (*channels)[c].rate * jump_tmp.squaredNorm();
            total += w[c];
        }
        if (!(total > 0.0)) return false;
        const double u = stream.uniform() * total;
        double cum = 0.0;
        size_t pick = channels->size() - 1;
        for (size_t c = 0; c < channels->size(); ++c) {
            cum += w[c];
            if (u < cum) {
                pick = c;
                break;
            }
        }
        jump_tmp.setZero();
        (*channels)[pick].op.apply(1.0, psi.data(), jump_tmp.data());
        const double n = jump_tmp.norm();
        if (!(n > 0.0)) return false;
        psi = jump_tmp / n;
        return true;
    }
};

/// Target overlap of a normalized state, split into the e-branch part and the
/// rest so a qutrit phase correction can be scored in closed form.
struct SplitOverlap {
    double m0 = 0.0;       // |A_rest|^2 + |A_e|^2
    Complex cross{0.0, 0.0};  // A_e * conj(A_rest)

    double raw() const { return m0 + 2.0 * (cross.real()); }
    double at(double phi) const { return m0 + 2.0 * (std::polar(1.0, phi) * cross).real(); }
};

SplitOverlap split_overlap(const Vector& raw, const StateVector& target) {
    const double n2 = raw.squaredNorm();
    if (!(n2 > 0.0)) throw std::runtime_error("evolve_trajectories: zero-norm state");
    const auto& spec = target.spec();
    Complex a_e(0.0, 0.0), a_rest(0.0, 0.0);
    const auto& t = target.amplitudes();
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        const Complex c = std::conj(t(i)) * raw(i);
        if (spec.qutrit_index_of(i) == static_cast<int>(Level::e)) a_e += c;
        else a_rest += c;
    }
    SplitOverlap s;
    s.m0 = (std::norm(a_e) + std::norm(a_rest)) / n2;
    s.cross = a_e * std::conj(a_rest) / n2;
    return s;
}

}  // namespace

void TrajectoryConfig::validate() const {
    if (n_traj < 1) throw std::invalid_argument("TrajectoryConfig: n_traj must be >= 1");
    if (!(jump_tol > 0.0)) throw std::invalid_argument("TrajectoryConfig: jump_tol must be positive");
    if (checkpoint_interval < 1) throw std::invalid_argument("TrajectoryConfig: checkpoint interval must be >= 1");
}

TrajectoryResult evolve_trajectories(const HamiltonianGenerator& gen,
                                     const std::vector<CollapseChannel>& channels,
                                     const StateVector& psi0, const EvolutionConfig& cfg,
                                     const TrajectoryConfig& tcfg, const StateVector* target) {
    tcfg.validate();
    if (psi0.spec() != gen.spec()) throw std::invalid_argument("evolve_trajectories: Hilbert-space mismatch");
    if (std::abs(psi0.norm() - 1.0) > kStateNormTol)
        throw std::invalid_argument("evolve_trajectories: initial state must be normalized");
    if (target && target->spec() != gen.spec())
        throw std::invalid_argument("evolve_trajectories: target Hilbert-space mismatch");

    Eigen::VectorXd decay = Eigen::VectorXd::Zero(gen.spec().dim());
    for (const auto& c : channels) decay += c.rate * c.op.gram_diagonal();

    // Shared deterministic no-jump segment with checkpoints.
    SharedSegment shared;
    shared.sched = detail::build_schedule(cfg, gen);
    shared.checkpoint_interval = tcfg.checkpoint_interval;
    const auto n_steps = shared.sched.n_steps();
    shared.norm2.resize(static_cast<size_t>(n_steps) + 1);
    {
        Vector x = psi0.amplitudes();
        detail::SchrodingerStepperBuffers buf(x.size());
        size_t next_mark = 0;
        for (std::int64_t k = 0; k <= n_steps; ++k) {
            shared.norm2[static_cast<size_t>(k)] = x.squaredNorm();
            if (k % tcfg.checkpoint_interval == 0) shared.checkpoints.push_back(x);
            while (next_mark < shared.sched.mark_index.size() && shared.sched.mark_index[next_mark] == k) {
                shared.record_states.push_back(x);
                ++next_mark;
            }
            if (k < n_steps)
                detail::schrodinger_rk4_step(gen, &decay, shared.sched.t[static_cast<size_t>(k)],
                                             shared.sched.t[static_cast<size_t>(k + 1)] -
                                                 shared.sched.t[static_cast<size_t>(k)],
                                             x, buf);
        }
        if (!x.allFinite()) throw std::runtime_error("evolve_trajectories: non-finite amplitudes (instability)");
    }

    const size_t n_marks = shared.sched.marks.size();
    TrajectoryResult res;
    res.times = shared.sched.marks;

    // Shared per-record overlaps for no-jump trajectories.
    std::vector<SplitOverlap> y_nojump(n_marks);
    if (target)
        for (size_t m = 0; m < n_marks; ++m) y_nojump[m] = split_overlap(shared.record_states[m], *target);

    const std::int64_t n_traj = tcfg.n_traj;
    std::vector<SplitOverlap> y;  // [traj * n_marks + m]
    if (target) y.assign(static_cast<size_t>(n_traj) * n_marks, SplitOverlap{});
    std::vector<int> jumps(static_cast<size_t>(n_traj), 0);

    const bool want_rho = tcfg.collect_density;
    const int threads = want_rho ? 1 : (tcfg.n_threads > 0 ? tcfg.n_threads : default_workers());
    std::vector<Matrix> rho_accum;
    if (want_rho)
        rho_accum.assign(n_marks, Matrix::Zero(gen.spec().dim(), gen.spec().dim()));
    // Trajectories still on the shared path at a mark contribute the shared
    // state; only the multiplicity is tracked (single-threaded mode).
    std::vector<std::int64_t> shared_mult(n_marks, 0);

    // A trajectory jumps when its threshold exceeds the no-jump survival
    // probability; the crossing step is found on the shared norm curve.
    auto first_crossing = [&](double r) -> std::int64_t {
        if (shared.norm2.back() >= r) return -1;
        std::int64_t lo = 0, hi = n_steps;  // norm2[lo] >= r, norm2[hi] < r
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (shared.norm2[static_cast<size_t>(mid)] < r) hi = mid;
            else lo = mid;
        }
        return hi;
    };

    std::atomic<std::int64_t> next_block{0};
    const std::int64_t block_size = 64;
    const std::int64_t n_blocks = (n_traj + block_size - 1) / block_size;
    std::atomic<std::int64_t> nojump_total{0};

    auto run_block = [&](TrajWorker& w, std::int64_t b) {
        const std::int64_t t_lo = b * block_size;
        const std::int64_t t_hi = std::min<std::int64_t>(n_traj, t_lo + block_size);
        for (std::int64_t traj = t_lo; traj < t_hi; ++traj) {
            RandomStream stream(tcfg.seed, static_cast<std::uint64_t>(traj));
            std::int64_t cross = -1;
            double r = 0.0;
            if (!channels.empty()) {
                r = stream.uniform();
                cross = first_crossing(r);
            }
            if (cross < 0) {
                if (target)
                    for (size_t m = 0; m < n_marks; ++m) y[static_cast<size_t>(traj) * n_marks + m] = y_nojump[m];
                if (want_rho)
                    for (size_t m = 0; m < n_marks; ++m) ++shared_mult[m];
                nojump_total.fetch_add(1, std::memory_order_relaxed);
                continue;
            }

            // Records before the jump step coincide with the shared path.
            size_t next_mark = 0;
            while (next_mark < n_marks && shared.sched.mark_index[next_mark] <= cross - 1) {
                if (target) y[static_cast<size_t>(traj) * n_marks + next_mark] = y_nojump[next_mark];
                if (want_rho) ++shared_mult[next_mark];
                ++next_mark;
            }

            // Replay from the nearest checkpoint to the start of the jump step.
            std::int64_t cp_step = 0;
            w.step_start = shared.checkpoint_for(cross - 1, &cp_step);
            for (std::int64_t k = cp_step; k < cross - 1; ++k)
                w.step(shared.sched.t[static_cast<size_t>(k)],
                       shared.sched.t[static_cast<size_t>(k + 1)] - shared.sched.t[static_cast<size_t>(k)],
                       w.step_start);

            double t_cur = shared.sched.t[static_cast<size_t>(cross - 1)];
            double h_cur = shared.sched.t[static_cast<size_t>(cross)] - t_cur;
            std::int64_t boundary = cross;
            while (true) {
                // w.step_start holds the state at t_cur; the threshold crossing
                // happens before t_cur + h_cur.
                const double t_jump = w.bisect_jump(w.step_start, t_cur, h_cur, r);
                if (!w.apply_jump(stream)) {
                    throw std::runtime_error("evolve_trajectories: zero-norm state at jump");
                }
                ++jumps[static_cast<size_t>(traj)];
                r = stream.uniform();
                // Finish the interrupted step, then continue on the grid.
                double t_at = t_jump;
                std::int64_t k = boundary;
                bool crossed = false;
                while (k <= n_steps) {
                    const double t_next = shared.sched.t[static_cast<size_t>(k)];
                    if (t_next > t_at) {
                        w.step_start = w.psi;
                        w.step(t_at, t_next - t_at, w.psi);
                        if (w.psi.squaredNorm() < r) {
                            t_cur = t_at;
                            h_cur = t_next - t_at;
                            boundary = k;
                            crossed = true;
                            break;
                        }
                        t_at = t_next;
                    }
                    while (next_mark < n_marks && shared.sched.mark_index[next_mark] == k) {
                        if (target)
                            y[static_cast<size_t>(traj) * n_marks + next_mark] =
                                split_overlap(w.psi, *target);
                        if (want_rho) {
                            const double n2 = w.psi.squaredNorm();
                            rho_accum[next_mark].noalias() += (w.psi * w.psi.adjoint()) / n2;
                        }
                        ++next_mark;
                    }
                    ++k;
                }
                if (!crossed) break;
            }
        }
    };

    if (threads <= 1) {
        TrajWorker w(gen, channels, decay, shared, tcfg);
        for (std::int64_t b = 0; b < n_blocks; ++b) run_block(w, b);
    } else {
        std::vector<std::thread> pool;
        for (int th = 0; th < threads; ++th) {
            pool.emplace_back([&]() {
                TrajWorker w(gen, channels, decay, shared, tcfg);
                while (true) {
                    const std::int64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
                    if (b >= n_blocks) break;
                    run_block(w, b);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    res.n_no_jump = nojump_total.load();

    if (want_rho) {
        // The shared state enters once per mark with its multiplicity.
        for (size_t m = 0; m < n_marks; ++m) {
            const double n2 = shared.record_states[m].squaredNorm();
            rho_accum[m].noalias() +=
                (static_cast<double>(shared_mult[m]) / n2) * (shared.record_states[m] * shared.record_states[m].adjoint());
            rho_accum[m] /= static_cast<double>(n_traj);
        }
        res.rho = std::move(rho_accum);
    }

    double total_jumps = 0.0;
    for (int j : jumps) total_jumps += j;
    res.mean_jumps = total_jumps / static_cast<double>(n_traj);

    if (target) {
        res.fidelity.resize(n_marks);
        for (size_t m = 0; m < n_marks; ++m) {
            // For no-jump trajectories the stored slot was filled with the
            // shared value; jumped ones hold their own overlaps.
            auto estimate = [&](auto&& value_of) {
                double mean = 0.0;
                for (std::int64_t k = 0; k < n_traj; ++k) mean += value_of(y[static_cast<size_t>(k) * n_marks + m]);
                mean /= static_cast<double>(n_traj);
                double var = 0.0;
                for (std::int64_t k = 0; k < n_traj; ++k) {
                    const double d = value_of(y[static_cast<size_t>(k) * n_marks + m]) - mean;
                    var += d * d;
                }
                var = (n_traj > 1) ? var / static_cast<double>(n_traj - 1) : 0.0;
                return std::pair<double, double>(mean, std::sqrt(var / static_cast<double>(n_traj)));
            };

            TrajectoryEstimate e;
            const auto raw = estimate([](const SplitOverlap& s) { return s.raw(); });
            e.mean_overlap_sq = raw.first;
            e.se_overlap_sq = raw.second;
            e.fidelity = std::sqrt(std::max(0.0, raw.first));
            e.std_error = (e.fidelity > 0.0) ? raw.second / (2.0 * e.fidelity) : 0.0;

            // The ensemble-optimal phase maximizes mean(m0) + 2 Re(e^{i phi} S)
            // with S the mean cross term.
            Complex s_mean(0.0, 0.0);
            for (std::int64_t k = 0; k < n_traj; ++k) s_mean += y[static_cast<size_t>(k) * n_marks + m].cross;
            s_mean /= static_cast<double>(n_traj);
            e.phi = (std::abs(s_mean) > 0.0) ? -std::arg(s_mean) : 0.0;
            const double phi = e.phi;
            const auto comp = estimate([phi](const SplitOverlap& s) { return s.at(phi); });
            e.fidelity_compensated = std::sqrt(std::max(0.0, comp.first));
            e.std_error_compensated =
                (e.fidelity_compensated > 0.0) ? comp.second / (2.0 * e.fidelity_compensated) : 0.0;
            res.fidelity[m] = e;
        }
    }
    return res;
}

}  // namespace catgate
