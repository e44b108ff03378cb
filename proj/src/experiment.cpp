#include "dmsec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "dmsec/rng.hpp"

namespace dmsec {

namespace {

using nlohmann::json;

// Runs fn(0..count-1) on up to `threads` workers. Results must be written to
// per-index slots; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Field access with the JSON path in every error message.
template <typename T>
T field(const json& obj, const std::string& path, const char* key, const T& fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError((path.empty() ? std::string(key) : path + "." + key) + ": " + e.what());
    }
}

const json& section(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    if (!doc.at(key).is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return doc.at(key);
}

// Substream tags keep the experiment families apart under one master seed.
enum : std::uint64_t { kTagBerAngle = 1, kTagRobustProbe = 2, kTagRobustError = 3 };

void write_header(std::ostream& out, const char* command, const ExperimentConfig& cfg) {
    out << "# dmsec-sim " << command << "\n";
    out << "# seed: " << cfg.seed << "\n";
    out << "# config: " << cfg.to_json().dump() << "\n";
}

std::int64_t symbols_per_realization(const ExperimentConfig& cfg) {
    return (cfg.trials + cfg.error_realizations - 1) / cfg.error_realizations;
}

void require_angles(const ExperimentConfig& cfg) {
    if (cfg.angles_deg.empty()) throw ConfigError("sweep.angles: at least one angle is required");
}

}  // namespace

std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0)) throw ConfigError("sweep.angles.step must be positive");
    if (stop_deg < start_deg) throw ConfigError("sweep.angles.stop must not be below start");
    const auto count = static_cast<std::int64_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) grid.push_back(start_deg + static_cast<double>(i) * step_deg);
    return grid;
}

ExperimentConfig ExperimentConfig::reference_defaults() {
    ExperimentConfig c;
    c.array = {16, 0.5};
    c.layout.desired_angles = {{30.0, 45.0}, {120.0, 135.0}};
    c.layout.eavesdropper_angles = {70.0, 95.0};
    c.snr_grid_db = {0, 2, 4, 6, 8, 10, 12, 14};
    c.schemes = {Scheme::MaxGrpNsp, Scheme::Leakage, Scheme::Bd};
    c.angles_deg = angle_grid(0.0, 180.0, 0.5);
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig c = reference_defaults();

    const json& arr = section(doc, "array");
    c.array.n_antennas = field(arr, "array", "n_antennas", c.array.n_antennas);
    c.array.spacing_wavelengths = field(arr, "array", "spacing_wavelengths", c.array.spacing_wavelengths);

    const json& lay = section(doc, "layout");
    c.layout.desired_angles = field(lay, "layout", "desired_groups", c.layout.desired_angles);
    c.layout.eavesdropper_angles = field(lay, "layout", "eavesdroppers", c.layout.eavesdropper_angles);

    const json& pow = section(doc, "power");
    c.total_power = field(pow, "power", "total_power", c.total_power);
    c.beta1_squared = field(pow, "power", "beta1_squared", c.beta1_squared);
    c.snr_db = field(pow, "power", "snr_db", c.snr_db);
    c.snr_grid_db = field(pow, "power", "snr_grid_db", c.snr_grid_db);

    if (doc.contains("schemes")) {
        const json& s = section(doc, "schemes");
        c.schemes.clear();
        const std::pair<const char*, Scheme> known[] = {
            {"max_grp_nsp", Scheme::MaxGrpNsp}, {"leakage", Scheme::Leakage}, {"bd", Scheme::Bd}};
        for (const auto& [key, scheme] : known) {
            if (field(s, "schemes", key, false)) c.schemes.push_back(scheme);
        }
        for (const auto& item : s.items()) {
            const bool recognised = std::any_of(std::begin(known), std::end(known),
                                                [&](const auto& kv) { return item.key() == kv.first; });
            if (!recognised) throw ConfigError("schemes." + item.key() + ": unknown scheme");
        }
    }

    const json& sw = section(doc, "sweep");
    if (sw.contains("angles")) {
        const json& a = sw.at("angles");
        if (a.is_array()) {
            c.angles_deg = field(sw, "sweep", "angles", c.angles_deg);
        } else if (a.is_object()) {
            c.angles_deg = angle_grid(field(a, "sweep.angles", "start", 0.0), field(a, "sweep.angles", "stop", 180.0),
                                      field(a, "sweep.angles", "step", 0.5));
        } else {
            throw ConfigError("sweep.angles: expected a list or {start, stop, step}");
        }
    }
    c.max_error_deg = field(sw, "sweep", "max_error_deg", c.max_error_deg);
    c.error_realizations = field(sw, "sweep", "error_realizations", c.error_realizations);

    c.trials = field(doc, "", "trials", c.trials);
    c.seed = field(doc, "", "seed", c.seed);

    const auto eve = field(doc, "", "eve_model", std::string("colluding"));
    if (eve == "colluding") {
        c.eve_model = EveModel::Colluding;
    } else if (eve == "best-single") {
        c.eve_model = EveModel::BestSingle;
    } else {
        throw ConfigError("eve_model: expected 'colluding' or 'best-single', got '" + eve + "'");
    }

    const json& fl = section(doc, "flops");
    c.flops.k = field(fl, "flops", "K", c.flops.k);
    c.flops.t = field(fl, "flops", "T", c.flops.t);
    c.flops.n = field(fl, "flops", "N", c.flops.n);
    c.flops.m = field(fl, "flops", "M", c.flops.m);
    c.flops.auto_scale_n = field(fl, "flops", "auto_scale_n", c.flops.auto_scale_n);

    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return from_json(doc);
}

json ExperimentConfig::to_json() const {
    json schemes_obj = {{"max_grp_nsp", false}, {"leakage", false}, {"bd", false}};
    for (const Scheme s : schemes) {
        switch (s) {
            case Scheme::MaxGrpNsp: schemes_obj["max_grp_nsp"] = true; break;
            case Scheme::Leakage: schemes_obj["leakage"] = true; break;
            case Scheme::Bd: schemes_obj["bd"] = true; break;
        }
    }
    return {
        {"array", {{"n_antennas", array.n_antennas}, {"spacing_wavelengths", array.spacing_wavelengths}}},
        {"layout", {{"desired_groups", layout.desired_angles}, {"eavesdroppers", layout.eavesdropper_angles}}},
        {"power",
         {{"total_power", total_power},
          {"beta1_squared", beta1_squared},
          {"snr_db", snr_db},
          {"snr_grid_db", snr_grid_db}}},
        {"schemes", schemes_obj},
        {"sweep",
         {{"angles", angles_deg}, {"max_error_deg", max_error_deg}, {"error_realizations", error_realizations}}},
        {"trials", trials},
        {"seed", seed},
        {"eve_model", eve_model == EveModel::Colluding ? "colluding" : "best-single"},
        {"flops",
         {{"K", flops.k}, {"T", flops.t}, {"N", flops.n}, {"M", flops.m}, {"auto_scale_n", flops.auto_scale_n}}},
    };
}

void ExperimentConfig::validate() const {
    layout.validate(array);
    if (!(total_power > 0.0)) throw ConfigError("power.total_power must be positive");
    if (!(beta1_squared > 0.0 && beta1_squared <= 1.0)) throw ConfigError("power.beta1_squared must lie in (0, 1]");
    if (!std::isfinite(snr_db)) throw ConfigError("power.snr_db must be finite");
    for (std::size_t i = 0; i < snr_grid_db.size(); ++i) {
        if (!std::isfinite(snr_grid_db[i])) throw ConfigError("power.snr_grid_db[" + std::to_string(i) + "] must be finite");
    }
    if (schemes.empty()) throw ConfigError("schemes: at least one scheme must be enabled");
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        if (!(angles_deg[i] >= 0.0 && angles_deg[i] <= 180.0)) {
            throw ConfigError("sweep.angles[" + std::to_string(i) + "] must lie in [0, 180]");
        }
    }
    if (!(max_error_deg >= 0.0)) throw ConfigError("sweep.max_error_deg must be >= 0");
    if (error_realizations < 1) throw ConfigError("sweep.error_realizations must be >= 1");
    if (trials < 10000) throw ConfigError("trials must be >= 10000");
}

PowerProfile ExperimentConfig::profile_at(double snr) const {
    return PowerProfile::from_snr(snr, beta1_squared, total_power);
}

std::vector<BerPoint> ber_angle_points(const ExperimentConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    require_angles(cfg);
    const Channels ch = build_channels(cfg.layout, cfg.array);
    const PowerProfile profile = cfg.profile_at(cfg.snr_db);
    std::vector<Design> designs;
    for (const Scheme s : cfg.schemes) designs.push_back(design_scheme(s, ch, profile));

    const std::size_t groups = static_cast<std::size_t>(ch.group_count());
    const std::size_t angles = cfg.angles_deg.size();
    std::vector<BerPoint> points(designs.size() * groups * angles);
    parallel_for(points.size(), opt.threads, [&](std::size_t idx) {
        const std::size_t p = idx % angles;
        const std::size_t k = (idx / angles) % groups;
        const std::size_t s = idx / (angles * groups);
        // Same draws for every scheme at a given (group, angle).
        const std::uint64_t seed = substream_seed(cfg.seed, {kTagBerAngle, k, p});
        points[idx] = ber_at_angle(cfg.angles_deg[p], static_cast<int>(k), designs[s], cfg.array, profile,
                                   cfg.trials, seed);
    });
    return points;
}

std::vector<SsrPoint> ssr_snr_points(const ExperimentConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    if (cfg.snr_grid_db.empty()) throw ConfigError("power.snr_grid_db: at least one SNR is required");
    const Channels ch = build_channels(cfg.layout, cfg.array);
    const int groups = ch.group_count();
    const int an_dim = ch.n_antennas() - ch.total_desired();
    const std::size_t snrs = cfg.snr_grid_db.size();

    std::vector<SsrPoint> points(cfg.schemes.size() * groups * snrs);
    parallel_for(cfg.schemes.size() * snrs, opt.threads, [&](std::size_t idx) {
        const std::size_t q = idx % snrs;
        const std::size_t s = idx / snrs;
        const PowerProfile profile = cfg.profile_at(cfg.snr_grid_db[q]);
        const NormFactors factors = norm_factors(profile, groups, an_dim);
        const Design d = design_scheme(cfg.schemes[s], ch, profile);
        for (int k = 0; k < groups; ++k) {
            points[(s * groups + k) * snrs + q] = {cfg.snr_grid_db[q], k, cfg.schemes[s],
                                                   secrecy_sum_rate(k, d, ch, profile, factors, cfg.eve_model)};
        }
    });
    return points;
}

std::vector<BerPoint> robust_ber_points(const ExperimentConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    require_angles(cfg);
    if (cfg.error_realizations < 100) throw ConfigError("sweep.error_realizations must be >= 100");

    const PowerProfile profile = cfg.profile_at(cfg.snr_db);
    const AngleErrorModel model = AngleErrorModel::for_array(cfg.max_error_deg, cfg.array);
    const std::size_t realizations = static_cast<std::size_t>(cfg.error_realizations);
    const std::size_t schemes = cfg.schemes.size();

    // designs[r * schemes + s]: scheme s designed from the angles measured in realization r.
    std::vector<Design> designs(realizations * schemes);
    parallel_for(realizations, opt.threads, [&](std::size_t r) {
        std::mt19937_64 rng(substream_seed(cfg.seed, {kTagRobustError, r}));
        const GroupLayout measured = perturb_layout(cfg.layout, model, rng);
        const Channels ch = build_channels(measured, cfg.array);
        for (std::size_t s = 0; s < schemes; ++s) designs[r * schemes + s] = design_scheme(cfg.schemes[s], ch, profile);
    });

    const std::size_t groups = cfg.layout.desired_angles.size();
    const std::size_t angles = cfg.angles_deg.size();
    const std::int64_t per_realization = symbols_per_realization(cfg);
    std::vector<BerPoint> points(schemes * groups * angles);
    parallel_for(points.size(), opt.threads, [&](std::size_t idx) {
        const std::size_t p = idx % angles;
        const std::size_t k = (idx / angles) % groups;
        const std::size_t s = idx / (angles * groups);
        std::uint64_t errors = 0;
        std::uint64_t bits = 0;
        for (std::size_t r = 0; r < realizations; ++r) {
            const std::uint64_t seed = substream_seed(cfg.seed, {kTagRobustProbe, r, k, p});
            const ProbeErrors e = probe_errors(cfg.angles_deg[p], static_cast<int>(k), designs[r * schemes + s],
                                               cfg.array, profile, per_realization, seed);
            errors += e.bit_errors;
            bits += e.bits;
        }
        BerPoint& out = points[idx];
        out.sweep_value = cfg.angles_deg[p];
        out.group = static_cast<int>(k);
        out.scheme = cfg.schemes[s];
        out.ber = static_cast<double>(errors) / static_cast<double>(bits);
        out.trials = per_realization * static_cast<std::int64_t>(realizations);
    });
    return points;
}

void run_ber_angle(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt) {
    const auto points = ber_angle_points(cfg, opt);
    write_header(out, "ber-angle", cfg);
    out << "scheme,group,angle_deg,ber,trials\n";
    for (const BerPoint& p : points) {
        out << scheme_id(p.scheme) << ',' << p.group + 1 << ',' << fmt_double(p.sweep_value) << ','
            << fmt_double(p.ber) << ',' << p.trials << '\n';
    }
}

void run_ssr_snr(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt) {
    const auto points = ssr_snr_points(cfg, opt);
    write_header(out, "ssr-snr", cfg);
    out << "scheme,group,snr_db,ssr\n";
    for (const SsrPoint& p : points) {
        out << scheme_id(p.scheme) << ',' << p.group + 1 << ',' << fmt_double(p.snr_db) << ',' << fmt_double(p.ssr)
            << '\n';
    }
}

void run_robust_ber(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt) {
    const auto points = robust_ber_points(cfg, opt);
    write_header(out, "robust-ber", cfg);
    out << "scheme,group,angle_deg,ber,trials,realizations\n";
    for (const BerPoint& p : points) {
        out << scheme_id(p.scheme) << ',' << p.group + 1 << ',' << fmt_double(p.sweep_value) << ','
            << fmt_double(p.ber) << ',' << p.trials << ',' << cfg.error_realizations << '\n';
    }
}

void run_flops(const ExperimentConfig& cfg, std::ostream& out, const RunOptions&) {
    write_header(out, "flops", cfg);
    out << "method,K,T,N,M,flops\n";

    struct Row {
        FlopsQuery q;
        std::int64_t count;
    };
    std::vector<Row> rows;
    const FlopsSweep& sw = cfg.flops;
    for (const FlopsMethod method : kAllMethods) {
        for (const auto k : sw.k) {
            for (const auto t : sw.t) {
                for (const auto n : sw.n) {
                    for (const auto m : sw.m) {
                        FlopsQuery q{method, k, t, n, m};
                        if (sw.auto_scale_n && k >= 1 && t >= 1 && m >= 1) q.n = std::max(n, k * t + m);
                        if (!q.in_domain()) {
                            out << "# warning: skipped " << method_id(method) << " K=" << k << " T=" << t
                                << " N=" << q.n << " M=" << m << " (requires positive sizes and N >= K*T + M)\n";
                            continue;
                        }
                        const std::int64_t f = flops(q);
                        rows.push_back({q, f});
                        out << method_id(method) << ',' << k << ',' << t << ',' << q.n << ',' << m << ',' << f << '\n';
                    }
                }
            }
        }
    }

    // Log-ratio slope between the smallest and largest value of every swept
    // variable, other sizes at their first listed value.
    if (sw.k.empty() || sw.t.empty() || sw.n.empty() || sw.m.empty()) return;
    const auto summarize = [&](const char* name, const std::vector<std::int64_t>& values, auto value_of,
                               auto held_fixed) {
        if (values.size() < 2) return;
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        if (*lo_it == *hi_it) return;
        for (const FlopsMethod method : kAllMethods) {
            const Row* lo = nullptr;
            const Row* hi = nullptr;
            for (const Row& r : rows) {
                if (r.q.method != method || !held_fixed(r.q)) continue;
                if (!lo && value_of(r.q) == *lo_it) lo = &r;
                if (!hi && value_of(r.q) == *hi_it) hi = &r;
            }
            if (!lo || !hi) continue;
            const double slope = std::log(static_cast<double>(hi->count) / static_cast<double>(lo->count)) /
                                 std::log(static_cast<double>(*hi_it) / static_cast<double>(*lo_it));
            out << "# exponent: method=" << method_id(method) << " variable=" << name << " from=" << *lo_it
                << " to=" << *hi_it << " value=" << fmt_double(slope) << '\n';
        }
    };
    // With auto_scale_n the N column follows K and T, so it is not held fixed.
    const auto n_fixed = [&](const FlopsQuery& q) { return sw.auto_scale_n || q.n == sw.n.front(); };
    summarize("K", sw.k, [](const FlopsQuery& q) { return q.k; },
              [&](const FlopsQuery& q) { return q.t == sw.t.front() && q.m == sw.m.front() && n_fixed(q); });
    summarize("T", sw.t, [](const FlopsQuery& q) { return q.t; },
              [&](const FlopsQuery& q) { return q.k == sw.k.front() && q.m == sw.m.front() && n_fixed(q); });
    summarize("N", sw.n, [](const FlopsQuery& q) { return q.n; },
              [&](const FlopsQuery& q) { return q.k == sw.k.front() && q.t == sw.t.front() && q.m == sw.m.front(); });
}

}  // namespace dmsec
