// experiments.cpp — Sweep harness and provenance output.

#include "catgate/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "catgate/evolve.hpp"
#include "catgate/rng.hpp"
#include "catgate/trajectories.hpp"
#include "catgate/version.hpp"

namespace catgate {

StateVector nonideal_initial_state(double delta, double alpha, const HilbertSpec& spec) {
    if (!(std::abs(delta) < 1.0))
        throw std::invalid_argument("nonideal_initial_state: |delta| must be < 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("nonideal_initial_state: alpha must be positive");
    const double wp = std::sqrt(1.0 + delta);
    const double wm = std::sqrt(1.0 - delta);

    std::vector<Vector> factors;
    Vector q = Vector::Zero(HilbertSpec::kQutritDim);
    q(static_cast<int>(Level::g)) = wp / std::sqrt(2.0);
    q(static_cast<int>(Level::e)) = wm / std::sqrt(2.0);
    factors.push_back(q);
    for (int j = 1; j <= spec.n_cavities(); ++j) {
        const Vector plus = coherent_state(Complex(alpha, 0.0), spec.cutoff(j)).state.amplitudes();
        const Vector minus = coherent_state(Complex(-alpha, 0.0), spec.cutoff(j)).state.amplitudes();
        factors.push_back(wp * plus + wm * minus);
    }
    return StateVector::normalized(spec, tensor(factors));
}

namespace {

/// Re-derive the couplings for a matching deviation c, keeping the
/// device's dependent-coupling ratios.
DeviceParams with_mismatch(const DeviceParams& base, double c, double kappa_inv) {
    DeviceParams p = base;
    p.c_mismatch = c;
    std::vector<double> det(static_cast<size_t>(p.n));
    for (int j = 1; j <= p.n; ++j) det[static_cast<size_t>(j - 1)] = p.detuning(j);
    // Ratios inferred from the base set so configured rules survive the sweep.
    const double gt_ratio = base.g_tilde[0] / base.g[0];
    const double gp_ratio = base.g_prime[0] / base.g[0];
    double base_gmax = 0.0, base_gcr = 0.0;
    for (int j = 0; j < p.n; ++j) base_gmax = std::max(base_gmax, base.g[static_cast<size_t>(j)]);
    for (int k = 0; k < p.n; ++k)
        for (int l = 0; l < p.n; ++l) base_gcr = std::max(base_gcr, base.g_cross[static_cast<size_t>(k)][static_cast<size_t>(l)]);
    const double gcr_ratio = base_gmax > 0.0 ? base_gcr / base_gmax : 0.0;

    p.g = solve_matched_couplings(base.g[0], det, c);
    double gmax = 0.0;
    for (int j = 0; j < p.n; ++j) {
        p.g_tilde[static_cast<size_t>(j)] = gt_ratio * p.g[static_cast<size_t>(j)];
        p.g_prime[static_cast<size_t>(j)] = gp_ratio * p.g[static_cast<size_t>(j)];
        gmax = std::max(gmax, p.g[static_cast<size_t>(j)]);
    }
    for (int k = 0; k < p.n; ++k)
        for (int l = 0; l < p.n; ++l)
            if (k != l) p.g_cross[static_cast<size_t>(k)][static_cast<size_t>(l)] = gcr_ratio * gmax;
    p.kappa.assign(static_cast<size_t>(p.n), 1.0 / kappa_inv);
    return p;
}

}  // namespace

PointResult run_point(const DeviceParams& base, double delta, double c, double kappa_inv,
                      const SolverSettings& s) {
    const auto t0 = std::chrono::steady_clock::now();
    DeviceParams p = with_mismatch(base, c, kappa_inv);
    p.delta_mix = delta;

    const HilbertSpec spec(p.n, s.cutoff);
    const GateTiming timing = lambda_and_gate_time(p, /*require_matched=*/c == 0.0);

    const StateVector psi0 = nonideal_initial_state(delta, p.alpha, spec);
    const StateVector target = ghz_target(GhzSpec{p.n, 0, p.alpha}, spec);

    HamiltonianOptions opts;
    opts.drop_gprime = s.drop_gprime;
    const auto gen = hamiltonian(p, spec, s.tier, s.tier == Tier::Lab ? Frame::Lab : Frame::Interaction, opts);
    const auto channels = collapse_operators(p, spec);

    EvolutionConfig cfg;
    cfg.t_final = timing.t_gate;
    cfg.resolution = s.resolution;
    cfg.record_times = {timing.t_gate};

    PointResult out;
    out.t_gate = timing.t_gate;
    if (s.kind == SolverKind::Trajectories) {
        TrajectoryConfig tc;
        tc.n_traj = s.n_traj;
        tc.seed = s.seed;
        tc.n_threads = s.n_threads;
        const auto res = evolve_trajectories(gen, channels, psi0, cfg, tc, &target);
        const auto& est = res.fidelity.back();
        out.fidelity_raw = est.fidelity;
        out.phi = est.phi;
        if (s.compensate_phase) {
            out.fidelity = est.fidelity_compensated;
            out.std_error = est.std_error_compensated;
        } else {
            out.fidelity = est.fidelity;
            out.std_error = est.std_error;
        }
        out.mean_jumps = res.mean_jumps;
    } else {
        MasterOptions mo;
        mo.n_threads = s.n_threads;
        const auto res = evolve_master(gen, channels, DensityMatrix::pure(psi0), cfg, mo);
        const auto& rho = res.states.back();
        out.fidelity_raw = fidelity(target, rho);
        // split the target on the qutrit e branch; the best phase follows in
        // closed form from the cross matrix element
        Vector t_e = target.amplitudes(), t_r = target.amplitudes();
        for (std::int64_t i = 0; i < spec.dim(); ++i) {
            if (spec.qutrit_index_of(i) == static_cast<int>(Level::e)) t_r(i) = 0.0;
            else t_e(i) = 0.0;
        }
        const Complex c_cross = t_e.dot(rho.entries() * t_r);
        const double m0 = t_r.dot(rho.entries() * t_r).real() + t_e.dot(rho.entries() * t_e).real();
        out.phi = (std::abs(c_cross) > 0.0) ? -std::arg(c_cross) : 0.0;
        const double comp_sq = m0 + 2.0 * std::abs(c_cross);
        out.fidelity = s.compensate_phase ? std::sqrt(std::max(0.0, comp_sq)) : out.fidelity_raw;
        out.std_error = 0.0;
    }
    out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("SweepSpec: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("SweepSpec: grid must be sorted");
    if (kappa_inv_set.empty()) throw std::invalid_argument("SweepSpec: empty kappa set");
    for (double k : kappa_inv_set)
        if (!(k > 0.0)) throw std::invalid_argument("SweepSpec: kappa_inv must be positive");
    for (double v : grid) {
        if (variable == Variable::Delta && !(v >= -1.0 && v <= 1.0))
            throw std::invalid_argument("SweepSpec: delta grid must lie in [-1, 1]");
        if (variable == Variable::C && !(v > -1.0 && v < 1.0))
            throw std::invalid_argument("SweepSpec: c grid must lie in (-1, 1)");
    }
}

std::uint64_t point_seed(std::uint64_t base_seed, int variable_id, int grid_index, int kappa_index) {
    const auto block = Philox4x64::block(
        {static_cast<std::uint64_t>(variable_id), static_cast<std::uint64_t>(grid_index),
         static_cast<std::uint64_t>(kappa_index), 0x63617467617465ULL},
        {base_seed, 0x73776565700a0a0aULL});
    return block[0];
}

namespace {

SweepResult run_sweep(const DeviceParams& base, const SweepSpec& spec) {
    spec.validate();
    const bool is_delta = spec.variable == SweepSpec::Variable::Delta;
    const int var_id = is_delta ? 0 : 1;
    const char* var_name = is_delta ? "delta" : "c";

    struct Task {
        int gi, ki;
    };
    std::vector<Task> tasks;
    for (size_t gi = 0; gi < spec.grid.size(); ++gi)
        for (size_t ki = 0; ki < spec.kappa_inv_set.size(); ++ki)
            tasks.push_back({static_cast<int>(gi), static_cast<int>(ki)});

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    const int workers = spec.n_workers > 0 ? spec.n_workers : default_workers();

    auto run_task = [&](size_t idx) {
        const Task& tk = tasks[idx];
        const double value = spec.grid[static_cast<size_t>(tk.gi)];
        const double kinv = spec.kappa_inv_set[static_cast<size_t>(tk.ki)];
        SolverSettings s = spec.solver;
        s.seed = point_seed(spec.solver.seed, var_id, tk.gi, tk.ki);
        const PointResult pr = is_delta ? run_point(base, value, 0.0, kinv, s)
                                        : run_point(base, 0.0, value, kinv, s);
        SweepRow& row = rows[idx];
        row.variable = var_name;
        row.value = value;
        row.kappa_inv = kinv;
        row.fidelity = pr.fidelity;
        row.std_error = pr.std_error;
        row.solver = to_string(s.kind);
        row.cutoff = s.cutoff;
        row.steps_per_period = s.resolution;
        row.n_traj = s.kind == SolverKind::Trajectories ? s.n_traj : 0;
        row.seed = s.seed;
        row.wall_s = pr.wall_s;
    };

    if (workers <= 1 || tasks.size() <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min<int>(workers, static_cast<int>(tasks.size())); ++w)
            pool.emplace_back([&]() {
                while (true) {
                    const size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) break;
                    run_task(i);
                }
            });
        for (auto& t : pool) t.join();
    }

    SweepResult res;
    res.rows = std::move(rows);
    std::sort(res.rows.begin(), res.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.kappa_inv < b.kappa_inv;
    });

    // Reports: |value|-monotonicity and kappa ordering within 3 combined SE,
    // and the even/odd asymmetry of the fidelity curve.
    auto find_row = [&](double value, double kinv) -> const SweepRow* {
        for (const auto& r : res.rows)
            if (r.value == value && r.kappa_inv == kinv) return &r;
        return nullptr;
    };
    for (double kinv : spec.kappa_inv_set) {
        std::vector<const SweepRow*> krows;
        for (const auto& r : res.rows)
            if (r.kappa_inv == kinv) krows.push_back(&r);
        for (const auto* a : krows) {
            for (const auto* b : krows) {
                if (std::abs(a->value) < std::abs(b->value) - 1e-15) {
                    const double se = 3.0 * std::hypot(a->std_error, b->std_error);
                    if (a->fidelity < b->fidelity - se) res.monotone_in_abs_value = false;
                }
            }
            const SweepRow* mirror = find_row(-a->value, kinv);
            if (mirror)
                res.max_asymmetry = std::max(res.max_asymmetry, std::abs(a->fidelity - mirror->fidelity));
        }
    }
    for (size_t gi = 0; gi < spec.grid.size(); ++gi) {
        for (size_t k1 = 0; k1 + 1 < spec.kappa_inv_set.size(); ++k1) {
            const SweepRow* a = find_row(spec.grid[gi], spec.kappa_inv_set[k1]);
            const SweepRow* b = find_row(spec.grid[gi], spec.kappa_inv_set[k1 + 1]);
            if (a && b && spec.kappa_inv_set[k1] < spec.kappa_inv_set[k1 + 1]) {
                const double se = 3.0 * std::hypot(a->std_error, b->std_error);
                if (b->fidelity < a->fidelity - se) res.monotone_in_kappa_inv = false;
            }
        }
    }
    return res;
}

}  // namespace

SweepResult run_delta_sweep(const DeviceParams& base, const SweepSpec& spec) {
    if (spec.variable != SweepSpec::Variable::Delta)
        throw std::invalid_argument("run_delta_sweep: variable must be delta");
    return run_sweep(base, spec);
}

SweepResult run_c_sweep(const DeviceParams& base, const SweepSpec& spec) {
    if (spec.variable != SweepSpec::Variable::C)
        throw std::invalid_argument("run_c_sweep: variable must be c");
    return run_sweep(base, spec);
}

double SweepResult::min_fidelity(double kappa_inv) const {
    double m = 2.0;
    for (const auto& r : rows)
        if (r.kappa_inv == kappa_inv) m = std::min(m, r.fidelity);
    if (m > 1.5) throw std::invalid_argument("min_fidelity: no rows for this kappa_inv");
    return m;
}

namespace {

const char* kCsvHeader = "variable,value,kappa_inv_us,fidelity,stderr,solver,cutoff,steps_per_period,n_traj,seed,wall_s\n";

std::string format_row(const SweepRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.12g,%.6g,%s,%d,%.10g,%d,%llu,%.3f\n",
                  r.variable.c_str(), r.value, r.kappa_inv * 1e6, r.fidelity, r.std_error,
                  r.solver.c_str(), r.cutoff, r.steps_per_period, r.n_traj,
                  static_cast<unsigned long long>(r.seed), r.wall_s);
    return buf;
}

}  // namespace

std::string SweepResult::to_csv() const {
    std::string out = kCsvHeader;
    for (const auto& r : rows) out += format_row(r);
    return out;
}

ConvergenceResult run_convergence(const DeviceParams& base, const std::vector<int>& cutoffs,
                                  const std::vector<double>& resolutions, double kappa_inv,
                                  const SolverSettings& s, double tol) {
    if (cutoffs.empty() || resolutions.empty())
        throw std::invalid_argument("run_convergence: empty refinement lists");
    ConvergenceResult res;
    res.tol = tol;
    for (int cut : cutoffs) {
        for (double r : resolutions) {
            SolverSettings si = s;
            si.cutoff = cut;
            si.resolution = r;
            const PointResult pr = run_point(base, 0.0, 0.0, kappa_inv, si);
            res.rows.push_back({cut, r, pr.fidelity, pr.std_error, pr.wall_s});
        }
    }
    auto fid = [&](int cut, double r) {
        for (const auto& row : res.rows)
            if (row.cutoff == cut && row.resolution == r) return row.fidelity;
        return -1.0;
    };
    for (size_t i = 0; i + 1 < cutoffs.size(); ++i) {
        if (std::abs(fid(cutoffs[i], resolutions.front()) - fid(cutoffs[i + 1], resolutions.front())) < tol) {
            res.converged_cutoff = cutoffs[i];
            break;
        }
    }
    for (size_t i = 0; i + 1 < resolutions.size(); ++i) {
        if (std::abs(fid(cutoffs.front(), resolutions[i]) - fid(cutoffs.front(), resolutions[i + 1])) < tol) {
            res.converged_resolution = resolutions[i];
            break;
        }
    }
    return res;
}

void write_sweep_csv(const std::string& path, const SweepResult& r) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    f << kCsvHeader;
    for (const auto& row : r.rows) {
        f << format_row(row);
        f.flush();  // partial results survive interruption
    }
}

void write_manifest(const std::string& path, const DeviceParams& params, const SweepSpec& spec,
                    const std::string& config_json) {
    nlohmann::json m;
    m["version"] = kVersion;
    m["variable"] = spec.variable == SweepSpec::Variable::Delta ? "delta" : "c";
    m["grid"] = spec.grid;
    std::vector<double> kus;
    for (double k : spec.kappa_inv_set) kus.push_back(k * 1e6);
    m["kappa_inv_us"] = kus;
    m["solver"] = to_string(spec.solver.kind);
    m["n_traj"] = spec.solver.n_traj;
    m["seed"] = spec.solver.seed;
    m["cutoff"] = spec.solver.cutoff;
    m["steps_per_period"] = spec.solver.resolution;
    m["drop_gprime"] = spec.solver.drop_gprime;
    m["compensate_phase"] = spec.solver.compensate_phase;

    nlohmann::json dp;
    dp["n"] = params.n;
    dp["alpha"] = params.alpha;
    dp["omega_eg_ghz"] = params.omega_eg / kTwoPi / 1e9;
    dp["omega_fe_ghz"] = params.omega_fe / kTwoPi / 1e9;
    dp["omega_fg_ghz"] = params.omega_fg / kTwoPi / 1e9;
    std::vector<double> wc, g, gp, gt;
    for (int j = 0; j < params.n; ++j) {
        wc.push_back(params.omega_c[static_cast<size_t>(j)] / kTwoPi / 1e9);
        g.push_back(params.g[static_cast<size_t>(j)] / kTwoPi / 1e6);
        gp.push_back(params.g_prime[static_cast<size_t>(j)] / kTwoPi / 1e6);
        gt.push_back(params.g_tilde[static_cast<size_t>(j)] / kTwoPi / 1e6);
    }
    dp["omega_c_ghz"] = wc;
    dp["g_mhz"] = g;
    dp["g_prime_mhz"] = gp;
    dp["g_tilde_mhz"] = gt;
    dp["gamma_eg_inv_us"] = 1e6 / params.gamma_eg;
    dp["gamma_fe_inv_us"] = 1e6 / params.gamma_fe;
    dp["gamma_fg_inv_us"] = 1e6 / params.gamma_fg;
    dp["gamma_phi_e_inv_us"] = 1e6 / params.gamma_phi_e;
    dp["gamma_phi_f_inv_us"] = 1e6 / params.gamma_phi_f;
    m["device"] = dp;

    // FNV-1a of the canonical configuration text.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : config_json) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    m["config_hash"] = hex;

    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char ts[64];
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    m["timestamp"] = ts;

    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
    f << m.dump(2) << "\n";
}

}  // namespace catgate
