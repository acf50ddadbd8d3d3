// SPDX-License-Identifier: Apache-2.0

#include "sicperf/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sicperf/error_prop.hpp"

namespace sicperf {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw std::invalid_argument("spec error at '" + where + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) field_error(where + "." + key, "unknown key");
    }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

sindr_scheme parse_scheme(const std::string& s, const std::string& where) {
    if (s == "zf") return sindr_scheme::zf;
    if (s == "mmse") return sindr_scheme::mmse;
    field_error(where, "scheme must be 'zf' or 'mmse'");
}

ordering_strategy parse_ordering(const std::string& s, const std::string& where) {
    if (s == "foschini") return ordering_strategy::foschini;
    if (s == "fixed") return ordering_strategy::fixed;
    field_error(where, "ordering must be 'foschini' or 'fixed'");
}

index_convention parse_indexing(const std::string& s, const std::string& where) {
    if (s == "sic_stage") return index_convention::sic_stage;
    if (s == "decoding_layer") return index_convention::decoding_layer;
    field_error(where, "indexing must be 'sic_stage' or 'decoding_layer'");
}

query_kind parse_kind(const std::string& s, const std::string& where) {
    if (s == "outage") return query_kind::outage;
    if (s == "asep") return query_kind::asep;
    if (s == "asep_overall") return query_kind::asep_overall;
    field_error(where, "type must be 'outage', 'asep' or 'asep_overall'");
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string kind_name(query_kind k) {
    switch (k) {
        case query_kind::outage: return "outage";
        case query_kind::asep: return "asep";
        default: return "asep_overall";
    }
}

std::string scheme_name(sindr_scheme s) { return s == sindr_scheme::zf ? "zf" : "mmse"; }
std::string ordering_name(ordering_strategy o) {
    return o == ordering_strategy::foschini ? "foschini" : "fixed";
}

system_config effective_config(const experiment_spec& spec, const experiment_query& q,
                               double snr_db) {
    system_config cfg = spec.config;
    cfg.p = db_to_linear(snr_db) * cfg.n0;
    if (q.kappa_t) cfg.kappa_t = *q.kappa_t;
    if (q.kappa_r) cfg.kappa_r = *q.kappa_r;
    if (q.omega) cfg.omega = *q.omega;
    return cfg;
}

std::size_t stage_of(const system_config& cfg, const experiment_query& q) {
    return (q.indexing == index_convention::sic_stage) ? q.index : cfg.m - q.index + 1;
}

double layer_conditional_asep(const system_config& cfg, sindr_scheme scheme,
                              ordering_strategy ordering, std::size_t layer,
                              const modulation_spec& mod) {
    asep_query aq;
    aq.mod = mod;
    aq.scheme = scheme;
    aq.cfg = cfg;
    aq.z_limit = asep_z_limit(cfg, scheme);
    outage_query oq;
    oq.index = layer;
    oq.indexing = index_convention::decoding_layer;
    oq.ordering = ordering;
    oq.scheme = scheme;
    const std::function<double(double)> outage_fn = [&](double g) {
        if (g <= 0.0) return 0.0;
        outage_query o = oq;
        o.gamma_th = g;
        return (scheme == sindr_scheme::zf) ? zf_outage(cfg, o) : mmse_outage(cfg, o);
    };
    return conditional_asep(aq, outage_fn);
}

}  // namespace

void experiment_spec::validate() const {
    if (config.n > 8) field_error("config.n", "analytic envelope requires n <= 8");
    system_config probe = config;
    probe.p = 1.0;
    probe.validate();
    if (sweep_db.empty()) field_error("sweep_db", "at least one sweep point required");
    for (std::size_t k = 1; k < sweep_db.size(); ++k) {
        if (!(sweep_db[k] > sweep_db[k - 1])) field_error("sweep_db", "must be strictly increasing");
    }
    if (queries.empty()) field_error("queries", "at least one query required");
    if (!engine_analytic && !engine_mc) field_error("engines", "at least one engine required");
    for (std::size_t k = 0; k < queries.size(); ++k) {
        const experiment_query& q = queries[k];
        const std::string where = "queries[" + std::to_string(k) + "]";
        if (q.kind != query_kind::asep_overall &&
            (q.index < 1 || q.index > config.m)) {
            field_error(where + ".index", "must lie in 1..m");
        }
        if (q.kind == query_kind::outage && !(q.gamma_th > 0.0)) {
            field_error(where + ".gamma_th", "must be > 0");
        }
    }
    if (trials < 1000 || ser_trials < 1000) field_error("trials", "must be >= 1000");
}

experiment_spec parse_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("spec parse error: ") + e.what());
    }
    if (!j.is_object()) field_error("$", "top level must be an object");
    reject_unknown(j, "$",
                   {"name", "config", "sweep_db", "queries", "engines", "trials", "ser_trials",
                    "seed", "output_dir"});

    experiment_spec spec;
    try {
        if (j.contains("name")) spec.name = j.at("name").get<std::string>();
        const json& c = j.at("config");
        reject_unknown(c, "config", {"n", "m", "n0", "kappa_t", "kappa_r", "omega", "omega_db"});
        spec.config.n = c.at("n").get<std::size_t>();
        spec.config.m = c.at("m").get<std::size_t>();
        spec.config.n0 = c.value("n0", 1.0);
        spec.config.kappa_t = c.value("kappa_t", 0.0);
        spec.config.kappa_r = c.value("kappa_r", 0.0);
        if (c.contains("omega_db")) {
            spec.config.omega = db_to_linear(c.at("omega_db").get<double>());
        } else {
            spec.config.omega = c.value("omega", 0.0);
        }
        spec.config.p = 1.0;

        spec.sweep_db = j.at("sweep_db").get<std::vector<double>>();

        for (std::size_t k = 0; k < j.at("queries").size(); ++k) {
            const json& qj = j.at("queries")[k];
            const std::string where = "queries[" + std::to_string(k) + "]";
            reject_unknown(qj, where,
                           {"type", "scheme", "ordering", "index", "indexing", "gamma_th",
                            "gamma_th_db", "label", "kappa_t", "kappa_r", "omega"});
            experiment_query q;
            q.kind = parse_kind(qj.value("type", "outage"), where + ".type");
            q.scheme = parse_scheme(qj.at("scheme").get<std::string>(), where + ".scheme");
            q.ordering = parse_ordering(qj.value("ordering", "foschini"), where + ".ordering");
            q.index = qj.value("index", std::size_t{1});
            q.indexing = parse_indexing(qj.value("indexing", "sic_stage"), where + ".indexing");
            if (qj.contains("gamma_th_db")) {
                q.gamma_th = db_to_linear(qj.at("gamma_th_db").get<double>());
            } else if (qj.contains("gamma_th")) {
                q.gamma_th = qj.at("gamma_th").get<double>();
            }
            q.label = qj.value("label", "");
            if (q.label.empty()) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "q%02zu", k + 1);
                q.label = buf;
            }
            if (qj.contains("kappa_t")) q.kappa_t = qj.at("kappa_t").get<double>();
            if (qj.contains("kappa_r")) q.kappa_r = qj.at("kappa_r").get<double>();
            if (qj.contains("omega")) q.omega = qj.at("omega").get<double>();
            spec.queries.push_back(q);
        }

        if (j.contains("engines")) {
            spec.engine_analytic = false;
            spec.engine_mc = false;
            for (const json& e : j.at("engines")) {
                const std::string name = e.get<std::string>();
                if (name == "analytic") {
                    spec.engine_analytic = true;
                } else if (name == "mc" || name == "montecarlo") {
                    spec.engine_mc = true;
                } else {
                    field_error("engines", "unknown engine '" + name + "'");
                }
            }
        }
        spec.trials = j.value("trials", spec.trials);
        spec.ser_trials = j.value("ser_trials", spec.ser_trials);
        spec.seed = j.value("seed", spec.seed);
        spec.output_dir = j.value("output_dir", spec.output_dir);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("spec field error: ") + e.what());
    }
    spec.validate();
    return spec;
}

experiment_spec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

experiment_spec figure_preset(const std::string& id) {
    experiment_spec spec;
    spec.name = id;
    spec.sweep_db = {0, 5, 10, 15, 20, 25, 30};

    const auto outage_query_of = [](sindr_scheme scheme, ordering_strategy ordering,
                                    std::size_t stage, double gamma_th, double kt, double kr,
                                    double om, const std::string& label) {
        experiment_query q;
        q.kind = query_kind::outage;
        q.scheme = scheme;
        q.ordering = ordering;
        q.index = stage;
        q.gamma_th = gamma_th;
        q.kappa_t = kt;
        q.kappa_r = kr;
        q.omega = om;
        q.label = label;
        return q;
    };

    if (id == "fig1") {
        // {n, m} = 4, gamma_th = 0 dB; ordered ZF stage 1 and fixed MMSE
        // stage 1 over the documented grid kappa in {0, 0.08, 0.175},
        // omega in {0, 0.1}.
        spec.config.n = 4;
        spec.config.m = 4;
        for (double k : {0.0, 0.08, 0.175}) {
            for (double w : {0.0, 0.1}) {
                std::ostringstream tag;
                tag << "k" << k << "_w" << w;
                spec.queries.push_back(outage_query_of(sindr_scheme::zf,
                                                       ordering_strategy::foschini, 1, 1.0, k, k,
                                                       w, "zf_s1_" + tag.str()));
                spec.queries.push_back(outage_query_of(sindr_scheme::mmse,
                                                       ordering_strategy::fixed, 1, 1.0, k, k, w,
                                                       "mmse_s1_" + tag.str()));
            }
        }
    } else if (id == "fig2") {
        // n = 4, m = 2, gamma_th = 0 dB; ordered and unordered ZF, both
        // stages; impairment point kappa = 0.08, omega = 0.1 (documented
        // default, captions do not pin it).
        spec.config.n = 4;
        spec.config.m = 2;
        for (std::size_t stage : {std::size_t{1}, std::size_t{2}}) {
            spec.queries.push_back(outage_query_of(sindr_scheme::zf, ordering_strategy::foschini,
                                                   stage, 1.0, 0.08, 0.08, 0.1,
                                                   "zf_ord_s" + std::to_string(stage)));
            spec.queries.push_back(outage_query_of(sindr_scheme::zf, ordering_strategy::fixed,
                                                   stage, 1.0, 0.08, 0.08, 0.1,
                                                   "zf_fix_s" + std::to_string(stage)));
        }
    } else if (id == "fig3") {
        // n = 6, gamma_th = 3 dB, omega = -10 dB (0.1), kappa_t = 0.08,
        // kappa_r = 0; m = 4 (documented choice, caption leaves it open).
        spec.config.n = 6;
        spec.config.m = 4;
        const double g = db_to_linear(3.0);
        spec.queries.push_back(outage_query_of(sindr_scheme::zf, ordering_strategy::foschini, 1,
                                               g, 0.08, 0.0, 0.1, "zf_s1"));
        spec.queries.push_back(outage_query_of(sindr_scheme::zf, ordering_strategy::foschini, 4,
                                               g, 0.08, 0.0, 0.1, "zf_s4"));
        spec.queries.push_back(outage_query_of(sindr_scheme::mmse, ordering_strategy::fixed, 1,
                                               g, 0.08, 0.0, 0.1, "mmse_s1"));
        spec.queries.push_back(outage_query_of(sindr_scheme::mmse, ordering_strategy::fixed, 4,
                                               g, 0.08, 0.0, 0.1, "mmse_s4"));
    } else if (id == "fig4") {
        // n = 8, MMSE stage-1 ASEP, BPSK, clean transmitter and perfect CSI;
        // kappa_r grid {0, 0.08, 0.175} (documented default).
        spec.config.n = 8;
        spec.config.m = 4;
        for (double kr : {0.0, 0.08, 0.175}) {
            experiment_query q;
            q.kind = query_kind::asep;
            q.scheme = sindr_scheme::mmse;
            q.ordering = ordering_strategy::fixed;
            q.index = 1;
            q.kappa_t = 0.0;
            q.kappa_r = kr;
            q.omega = 0.0;
            std::ostringstream tag;
            tag << "mmse_asep_s1_kr" << kr;
            q.label = tag.str();
            spec.queries.push_back(q);
        }
    } else if (id == "fig5") {
        // Total ASEP, {n, m} = 4, kappa_t = 0, BPSK; ideal and impaired
        // receiver/CSI points for both schemes (documented default pairs).
        spec.config.n = 4;
        spec.config.m = 4;
        struct point { double kr, w; const char* tag; };
        for (const point& pt : {point{0.0, 0.0, "ideal"}, point{0.08, 0.05, "impaired"}}) {
            for (sindr_scheme sc : {sindr_scheme::zf, sindr_scheme::mmse}) {
                experiment_query q;
                q.kind = query_kind::asep_overall;
                q.scheme = sc;
                q.ordering = (sc == sindr_scheme::zf) ? ordering_strategy::foschini
                                                      : ordering_strategy::fixed;
                q.kappa_t = 0.0;
                q.kappa_r = pt.kr;
                q.omega = pt.w;
                q.label = scheme_name(sc) + std::string("_total_") + pt.tag;
                spec.queries.push_back(q);
            }
        }
    } else {
        throw std::invalid_argument("unknown preset '" + id + "' (expected fig1..fig5)");
    }
    spec.validate();
    return spec;
}

double analytic_value(const system_config& cfg, const experiment_query& q) {
    const modulation_spec mod = bpsk();
    switch (q.kind) {
        case query_kind::outage: {
            outage_query oq;
            oq.gamma_th = q.gamma_th;
            oq.index = q.index;
            oq.indexing = q.indexing;
            oq.ordering = q.ordering;
            oq.scheme = q.scheme;
            if (q.scheme == sindr_scheme::zf) return zf_outage(cfg, oq);
            if (q.ordering == ordering_strategy::foschini) {
                return std::numeric_limits<double>::quiet_NaN();  // no closed form
            }
            return mmse_outage(cfg, oq);
        }
        case query_kind::asep: {
            if (q.scheme == sindr_scheme::mmse && q.ordering == ordering_strategy::foschini) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            const std::size_t stage = stage_of(cfg, q);
            const std::size_t layer = cfg.m - stage + 1;
            return layer_conditional_asep(cfg, q.scheme, q.ordering, layer, mod);
        }
        default: {
            if (q.scheme == sindr_scheme::mmse && q.ordering == ordering_strategy::foschini) {
                return std::numeric_limits<double>::quiet_NaN();
            }
            std::vector<double> per_layer(cfg.m);
            for (std::size_t layer = 1; layer <= cfg.m; ++layer) {
                per_layer[layer - 1] =
                    layer_conditional_asep(cfg, q.scheme, q.ordering, layer, mod);
            }
            return overall_asep(mod, per_layer);
        }
    }
}

std::vector<std::string> run_experiment(const experiment_spec& spec, unsigned threads) {
    spec.validate();
    std::filesystem::create_directories(spec.output_dir);
    const modulation_spec mod = bpsk();
    std::vector<std::string> paths;

    for (std::size_t qi = 0; qi < spec.queries.size(); ++qi) {
        const experiment_query& q = spec.queries[qi];
        const std::string path = spec.output_dir + "/" + spec.name + "_" + q.label + ".csv";
        std::ofstream out(path, std::ios::binary);  // binary => LF line endings everywhere
        if (!out) throw std::runtime_error("cannot open output file: " + path);

        out << "# sicperf experiment: " << spec.name << "\n";
        out << "# query: type=" << kind_name(q.kind) << " scheme=" << scheme_name(q.scheme)
            << " ordering=" << ordering_name(q.ordering);
        if (q.kind != query_kind::asep_overall) out << " index=" << q.index;
        if (q.kind == query_kind::outage) out << " gamma_th=" << fmt9(q.gamma_th);
        out << "\n";
        {
            const system_config c0 = effective_config(spec, q, spec.sweep_db.front());
            out << "# config: n=" << c0.n << " m=" << c0.m << " n0=" << fmt9(c0.n0)
                << " kappa_t=" << fmt9(c0.kappa_t) << " kappa_r=" << fmt9(c0.kappa_r)
                << " omega=" << fmt9(c0.omega) << "\n";
        }
        out << "# seed=" << spec.seed << " trials=" << spec.trials
            << " ser_trials=" << spec.ser_trials << " engines="
            << (spec.engine_analytic ? "analytic" : "")
            << ((spec.engine_analytic && spec.engine_mc) ? "," : "")
            << (spec.engine_mc ? "mc" : "") << "\n";
        out << "snr_db,analytic,mc_value,mc_ci_low,mc_ci_high,trials,mode\n";

        for (std::size_t pi = 0; pi < spec.sweep_db.size(); ++pi) {
            const double snr_db = spec.sweep_db[pi];
            const system_config cfg = effective_config(spec, q, snr_db);
            out << fmt9(snr_db) << ",";
            if (spec.engine_analytic) {
                out << fmt9(analytic_value(cfg, q));
            }
            out << ",";
            if (spec.engine_mc) {
                const std::uint64_t derived_seed =
                    spec.seed + 0x9E3779B97F4A7C15ULL * (qi * 1024 + pi + 1);
                if (q.kind == query_kind::outage) {
                    outage_query oq;
                    oq.gamma_th = q.gamma_th;
                    oq.index = q.index;
                    oq.indexing = q.indexing;
                    oq.ordering = q.ordering;
                    oq.scheme = q.scheme;
                    const outage_estimate est = estimate_outage(
                        cfg, oq, spec.trials, derived_seed, mc_mode::formula_sampling,
                        sindr_channel_mode::estimated, threads);
                    out << fmt9(est.value) << "," << fmt9(est.ci_low) << ","
                        << fmt9(est.ci_high) << "," << est.trials << ",formula_sampling";
                } else {
                    const feedback_mode fb = (q.kind == query_kind::asep)
                                                 ? feedback_mode::genie
                                                 : feedback_mode::decision;
                    const ser_estimate est =
                        estimate_ser(cfg, q.scheme, q.ordering, mod, spec.ser_trials,
                                     derived_seed, fb, threads);
                    const outage_estimate& rec = (q.kind == query_kind::asep)
                                                     ? est.per_stage[stage_of(cfg, q) - 1]
                                                     : est.overall;
                    out << fmt9(rec.value) << "," << fmt9(rec.ci_low) << ","
                        << fmt9(rec.ci_high) << "," << rec.trials << ",link_level";
                }
            } else {
                out << ",,,0,none";
            }
            out << "\n";
        }
        paths.push_back(path);
    }
    return paths;
}

}  // namespace sicperf
