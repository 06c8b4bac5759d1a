// config.cpp — JSON configuration loading with strict key checking.

#include "catgate/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace catgate {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + path + it.key() + "'");
    }
}

double need_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw std::invalid_argument("config: missing key '" + path + key + "'");
    if (!obj[key].is_number()) throw std::invalid_argument("config: '" + path + key + "' must be a number");
    return obj[key].get<double>();
}

}  // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.params = table1_params();
    cfg.kappa_inv = 45e-6;
    cfg.gtilde_ratio = 1.0 / std::sqrt(2.0);
    cfg.gprime_ratio = 0.01;
    cfg.gcross_ratio = 0.01;
    cfg.source = "builtin";
    return cfg;
}

RunConfig parse_config(const std::string& json_text, const std::string& source_name) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + source_name + ": " + e.what());
    }

    reject_unknown(j, {"alpha", "qutrit_ghz", "cavities_ghz", "couplings_mhz", "coupling_rules", "decoherence_us"}, "");

    RunConfig cfg;
    DeviceParams& p = cfg.params;
    p.alpha = need_number(j, "alpha", "");
    if (!(p.alpha > 0.0)) throw std::invalid_argument("config: alpha must be positive");

    const json& q = j.at("qutrit_ghz");
    reject_unknown(q, {"omega_eg", "omega_fe", "omega_fg"}, "qutrit_ghz.");
    p.omega_eg = kTwoPi * 1e9 * need_number(q, "omega_eg", "qutrit_ghz.");
    p.omega_fe = kTwoPi * 1e9 * need_number(q, "omega_fe", "qutrit_ghz.");
    p.omega_fg = kTwoPi * 1e9 * need_number(q, "omega_fg", "qutrit_ghz.");

    if (!j.contains("cavities_ghz") || !j["cavities_ghz"].is_array() || j["cavities_ghz"].empty())
        throw std::invalid_argument("config: cavities_ghz must be a nonempty array");
    for (const auto& v : j["cavities_ghz"]) {
        if (!v.is_number()) throw std::invalid_argument("config: cavities_ghz entries must be numbers");
        p.omega_c.push_back(kTwoPi * 1e9 * v.get<double>());
    }
    p.n = static_cast<int>(p.omega_c.size());

    const json& cp = j.at("couplings_mhz");
    reject_unknown(cp, {"g1"}, "couplings_mhz.");
    const double g1 = kTwoPi * 1e6 * need_number(cp, "g1", "couplings_mhz.");

    const json& rules = j.at("coupling_rules");
    reject_unknown(rules, {"matching_c", "g_tilde_over_g", "g_prime_over_g", "g_cross_over_gmax"}, "coupling_rules.");
    const double c = need_number(rules, "matching_c", "coupling_rules.");
    cfg.gtilde_ratio = need_number(rules, "g_tilde_over_g", "coupling_rules.");
    cfg.gprime_ratio = need_number(rules, "g_prime_over_g", "coupling_rules.");
    cfg.gcross_ratio = need_number(rules, "g_cross_over_gmax", "coupling_rules.");
    p.c_mismatch = c;

    std::vector<double> det(static_cast<size_t>(p.n));
    for (int jx = 1; jx <= p.n; ++jx) det[static_cast<size_t>(jx - 1)] = p.omega_fe - p.omega_c[static_cast<size_t>(jx - 1)];
    p.g = solve_matched_couplings(g1, det, c);
    double gmax = 0.0;
    for (double g : p.g) gmax = std::max(gmax, g);
    p.g_tilde.resize(static_cast<size_t>(p.n));
    p.g_prime.resize(static_cast<size_t>(p.n));
    for (int jx = 0; jx < p.n; ++jx) {
        p.g_tilde[static_cast<size_t>(jx)] = cfg.gtilde_ratio * p.g[static_cast<size_t>(jx)];
        p.g_prime[static_cast<size_t>(jx)] = cfg.gprime_ratio * p.g[static_cast<size_t>(jx)];
    }
    p.g_cross.assign(static_cast<size_t>(p.n), std::vector<double>(static_cast<size_t>(p.n), 0.0));
    for (int k = 0; k < p.n; ++k)
        for (int l = 0; l < p.n; ++l)
            if (k != l) p.g_cross[static_cast<size_t>(k)][static_cast<size_t>(l)] = cfg.gcross_ratio * gmax;

    const json& dec = j.at("decoherence_us");
    reject_unknown(dec, {"gamma_eg_inv", "gamma_fe_inv", "gamma_fg_inv", "gamma_phi_e_inv", "gamma_phi_f_inv", "kappa_inv"},
                   "decoherence_us.");
    auto rate = [&](const char* key) {
        const double inv_us = need_number(dec, key, "decoherence_us.");
        if (!(inv_us > 0.0)) throw std::invalid_argument(std::string("config: decoherence_us.") + key + " must be positive");
        return 1.0 / (inv_us * 1e-6);
    };
    p.gamma_eg = rate("gamma_eg_inv");
    p.gamma_fe = rate("gamma_fe_inv");
    p.gamma_fg = rate("gamma_fg_inv");
    p.gamma_phi_e = rate("gamma_phi_e_inv");
    p.gamma_phi_f = rate("gamma_phi_f_inv");
    cfg.kappa_inv = need_number(dec, "kappa_inv", "decoherence_us.") * 1e-6;
    if (!(cfg.kappa_inv > 0.0)) throw std::invalid_argument("config: decoherence_us.kappa_inv must be positive");
    p.kappa.assign(static_cast<size_t>(p.n), 1.0 / cfg.kappa_inv);

    p.validate();
    cfg.source = source_name;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const RunConfig& cfg) {
    const DeviceParams& p = cfg.params;
    json j;
    j["alpha"] = p.alpha;
    j["qutrit_ghz"] = {{"omega_eg", p.omega_eg / (kTwoPi * 1e9)},
                       {"omega_fe", p.omega_fe / (kTwoPi * 1e9)},
                       {"omega_fg", p.omega_fg / (kTwoPi * 1e9)}};
    std::vector<double> wc;
    for (double w : p.omega_c) wc.push_back(w / (kTwoPi * 1e9));
    j["cavities_ghz"] = wc;
    j["couplings_mhz"] = {{"g1", p.g[0] / (kTwoPi * 1e6)}};
    j["coupling_rules"] = {{"matching_c", p.c_mismatch},
                           {"g_tilde_over_g", cfg.gtilde_ratio},
                           {"g_prime_over_g", cfg.gprime_ratio},
                           {"g_cross_over_gmax", cfg.gcross_ratio}};
    j["decoherence_us"] = {{"gamma_eg_inv", 1e6 / p.gamma_eg},
                           {"gamma_fe_inv", 1e6 / p.gamma_fe},
                           {"gamma_fg_inv", 1e6 / p.gamma_fg},
                           {"gamma_phi_e_inv", 1e6 / p.gamma_phi_e},
                           {"gamma_phi_f_inv", 1e6 / p.gamma_phi_f},
                           {"kappa_inv", cfg.kappa_inv * 1e6}};
    return j.dump(2) + "\n";
}

}  // namespace catgate
