#ifndef XYQFI_SWEEP_HPP
#define XYQFI_SWEEP_HPP

// Grid sweeps over (beta, h) with CSV output.  The configuration is strict
// JSON: unknown keys are rejected so a typo in a physical parameter cannot
// silently fall back to a default.  Only beta and h may be ranges — they are
// the quantities the output rows record, so a grid over any other knob would
// produce rows that cannot be traced back to their inputs.  Rows are written
// in deterministic row-major order (beta slow, h fast) regardless of which
// worker finished first, with 17 significant digits so every double survives
// a text round trip.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "fisher.hpp"

namespace xyqfi {

struct Axis {
    double min = 0.0, max = 0.0;
    int count = 1;  // 1 = fixed scalar (min == max), ranged otherwise

    static Axis scalar(double v) { return {v, v, 1}; }
    bool ranged() const { return count > 1; }
    std::vector<double> points() const {
        if (count < 1) throw std::invalid_argument("Axis: empty range");
        std::vector<double> p(count);
        for (int i = 0; i < count; ++i)
            p[i] = (count == 1) ? min : min + (max - min) * double(i) / double(count - 1);
        return p;
    }
};

struct SweepConfig {
    int n = 8;
    double j = 1.0;
    double gamma = 1.0;
    Axis h = Axis::scalar(0.0);
    Axis beta = Axis::scalar(1.0);
    BathParams bath{};
    Regime regime = Regime::weak;
    Alpha parameter = Alpha::field;
    bool finite_size = true;
    bool ppa_ratio = false;
    std::string output = "scan.csv";

    ChainParams chain_at(double hv) const { return ChainParams{n, j, gamma, hv}; }

    void validate() const {
        chain_at(h.points().front()).validate();
        bath.validate();
        for (double b : beta.points())
            if (b <= 0.0) throw std::invalid_argument("SweepConfig: beta grid must be positive");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                                const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || (it.key() == k);
        if (!ok) throw std::invalid_argument(std::string("config: unknown key \"") + it.key() + "\" in " + where);
    }
}

inline Axis parse_axis(const nlohmann::json& v, const char* name) {
    if (v.is_number()) return Axis::scalar(v.get<double>());
    if (v.is_array()) {
        if (v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number_integer())
            throw std::invalid_argument(std::string("config: ") + name + " range must be [min, max, count]");
        Axis a{v[0].get<double>(), v[1].get<double>(), v[2].get<int>()};
        if (a.count < 2)
            throw std::invalid_argument(std::string("config: ") + name + " range needs count >= 2");
        return a;
    }
    throw std::invalid_argument(std::string("config: ") + name + " must be a number or [min, max, count]");
}

}  // namespace detail

inline SweepConfig parse_sweep_config(const nlohmann::json& root) {
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
    detail::reject_unknown_keys(root,
                                {"chain", "bath", "beta", "regime", "parameter", "finite_size",
                                 "ppa_ratio", "output"},
                                "top level");
    SweepConfig c;
    if (root.contains("chain")) {
        const auto& ch = root["chain"];
        detail::reject_unknown_keys(ch, {"n", "j", "gamma", "h"}, "chain");
        if (ch.contains("n")) {
            if (!ch["n"].is_number_integer()) throw std::invalid_argument("config: chain.n must be an integer");
            c.n = ch["n"].get<int>();
        }
        if (ch.contains("j")) c.j = ch["j"].get<double>();
        if (ch.contains("gamma")) c.gamma = ch["gamma"].get<double>();
        if (ch.contains("h")) c.h = detail::parse_axis(ch["h"], "chain.h");
    }
    if (root.contains("bath")) {
        const auto& ba = root["bath"];
        detail::reject_unknown_keys(ba, {"g", "omega_c"}, "bath");
        if (ba.contains("g")) c.bath.g = ba["g"].get<double>();
        if (ba.contains("omega_c")) c.bath.omega_c = ba["omega_c"].get<double>();
    }
    if (root.contains("beta")) c.beta = detail::parse_axis(root["beta"], "beta");
    if (root.contains("regime")) {
        std::string r = root["regime"].get<std::string>();
        if (r == "weak") c.regime = Regime::weak;
        else if (r == "strong") c.regime = Regime::strong;
        else throw std::invalid_argument("config: regime must be \"weak\" or \"strong\"");
    }
    if (root.contains("parameter")) {
        std::string a = root["parameter"].get<std::string>();
        if (a == "h") c.parameter = Alpha::field;
        else if (a == "beta") c.parameter = Alpha::temperature;
        else throw std::invalid_argument("config: parameter must be \"h\" or \"beta\"");
    }
    if (root.contains("finite_size")) c.finite_size = root["finite_size"].get<bool>();
    if (root.contains("ppa_ratio")) c.ppa_ratio = root["ppa_ratio"].get<bool>();
    if (root.contains("output")) c.output = root["output"].get<std::string>();
    c.validate();
    return c;
}

inline SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json root;
    in >> root;
    return parse_sweep_config(root);
}

struct SweepRow {
    double beta = 0.0, h = 0.0;
    QfiBreakdown breakdown;
    double ratio = 0.0;  // meaningful only when the config asked for it
};

inline int resolve_thread_count(int flag_value = 0) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("XYQFI_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

// evaluate the grid; points are independent, so workers pull indices from a
// shared counter and write into preallocated slots — output order is the grid
// order no matter how the work interleaves
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int threads = 0) {
    cfg.validate();
    std::vector<double> betas = cfg.beta.points();
    std::vector<double> hs = cfg.h.points();
    std::vector<SweepRow> rows(betas.size() * hs.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mu;

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rows.size() || failed.load()) break;
            double beta = betas[i / hs.size()];
            double hv = hs[i % hs.size()];
            try {
                SweepRow& r = rows[i];
                r.beta = beta;
                r.h = hv;
                ChainParams p = cfg.chain_at(hv);
                r.breakdown = qfi_total(p, cfg.bath, beta, cfg.parameter, cfg.regime,
                                        {cfg.finite_size, false, false});
                if (cfg.ppa_ratio)
                    r.ratio = ratio_ppa(p, cfg.bath, beta, cfg.parameter, cfg.regime);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    int nt = std::min<size_t>(resolve_thread_count(threads), rows.size());
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error("scan: " + first_error);
    return rows;
}

inline void write_csv(std::ostream& out, const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
    out << "beta,h,qfi_psi_dd,qfi_tilde,qfi_quantum,qfi_total";
    if (cfg.ppa_ratio) out << ",ratio_ppa";
    out << "\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << sep;
    };
    for (const SweepRow& r : rows) {
        put(r.beta, ',');
        put(r.h, ',');
        put(r.breakdown.psi_dd, ',');
        put(r.breakdown.tilde_c, ',');
        put(r.breakdown.quantum, ',');
        if (cfg.ppa_ratio) {
            put(r.breakdown.total, ',');
            put(r.ratio, '\n');
        } else {
            put(r.breakdown.total, '\n');
        }
    }
}

inline void write_csv_file(const std::string& path, const SweepConfig& cfg,
                           const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);  // LF endings on every platform
    if (!out) throw std::runtime_error("scan: cannot open output file " + path);
    write_csv(out, cfg, rows);
    out.flush();
    if (!out) throw std::runtime_error("scan: write failed for " + path);
}

}  // namespace xyqfi

#endif
