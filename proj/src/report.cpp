#include "ecbsd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ecbsd/local_zeta.hpp"

namespace ecbsd {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

// --- JsonWriter ---------------------------------------------------------------

void JsonWriter::comma_if_needed() {
    if (pending_key_) { pending_key_ = false; return; }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma_if_needed();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma_if_needed();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    comma_if_needed();
    out_ += '"';
    for (char ch : v) {
        if (ch == '"' || ch == '\\') out_ += '\\';
        out_ += ch;
    }
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(double v) {
    comma_if_needed();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(i64 v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(u64 v) {
    comma_if_needed();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<i64>(v)); }

JsonWriter& JsonWriter::value(bool v) {
    comma_if_needed();
    out_ += v ? "true" : "false";
    return *this;
}

// --- config -------------------------------------------------------------------

namespace {

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw usage_error(std::string("bad ") + what + " list entry: \"" + item + "\"");
        }
    }
    if (out.empty()) throw usage_error(std::string("empty ") + what + " list");
    return out;
}

u64 parse_u64(const std::string& text, const char* what) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw usage_error(std::string("bad ") + what + " value: \"" + text + "\"");
    }
}

double parse_f64(const std::string& text, const char* what) {
    try {
        size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw usage_error(std::string("bad ") + what + " value: \"" + text + "\"");
    }
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw usage_error("cannot write " + path.string());
    f << text;
    if (!f.good()) throw usage_error("write failed for " + path.string());
}

} // namespace

void RunConfig::validate() const {
    if (pmax < 1 || pmax > 1'000'000) throw usage_error("pmax must lie in [1, 10^6]");
    if (T < 1 || T > kDirichletMaxT) throw usage_error("T must lie in [1, 10^6]");
    if (!(h > 0.0) || h > 1.0) throw usage_error("grid step h must lie in (0, 1]");
    if (!(tau > 0.0)) throw usage_error("tau must be positive");
    if (K < 0 || K > 16) throw usage_error("K must lie in [0, 16]");
    if (height > kSearchMaxH) throw usage_error("height must be <= 10^6");
    if (relmax < 1 || relmax > 64) throw usage_error("relation bound must lie in [1, 64]");
    for (double e : eps)
        if (!(e > 0.0) || e > 1.0) throw usage_error("eps values must lie in (0, 1]");
    for (double cv : c)
        if (!(cv > 1.0)) throw usage_error("c values must be > 1");
    if (k1_N < 1 || k1_N > kMertensMaxN) throw usage_error("k1 N must lie in [1, 10^7]");
}

RunConfig load_config_file(const fs::path& path, RunConfig cfg) {
    std::ifstream f(path);
    if (!f) throw usage_error("cannot read config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw usage_error("config line " + std::to_string(lineno) + " is not key=value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key == "curve") cfg.curve = val;
        else if (key == "pmax") cfg.pmax = parse_u64(val, "pmax");
        else if (key == "T") cfg.T = parse_u64(val, "T");
        else if (key == "h") cfg.h = parse_f64(val, "h");
        else if (key == "tau") cfg.tau = parse_f64(val, "tau");
        else if (key == "K") cfg.K = static_cast<int>(parse_u64(val, "K"));
        else if (key == "height") cfg.height = parse_u64(val, "height");
        else if (key == "relmax") cfg.relmax = static_cast<int>(parse_u64(val, "relmax"));
        else if (key == "eps") cfg.eps = parse_double_list(val, "eps");
        else if (key == "c") cfg.c = parse_double_list(val, "c");
        else if (key == "k1_N") cfg.k1_N = parse_u64(val, "k1_N");
        else if (key == "out") cfg.out = val;
        else throw usage_error("unknown config key \"" + key + "\"");
    }
    return cfg;
}

// --- a_p table / cache --------------------------------------------------------

std::string curve_tag(const CurveQ& c) {
    std::string s = c.to_string();
    std::string out;
    for (char ch : s) {
        if (ch == ',') out += '_';
        else if (ch == '-') out += 'm';
        else out += ch;
    }
    return out;
}

std::string ap_table_text(const CurveQ& c, const std::vector<LocalData>& rows) {
    std::string out = "# curve=" + c.to_string() + " version=1\n";
    for (const auto& r : rows) {
        out += std::to_string(r.p);
        out += '\t';
        out += r.good ? std::to_string(r.a_p) : "-";
        out += '\t';
        out += r.good ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<LocalData> parse_ap_table(const std::string& text, const CurveQ& expect) {
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw usage_error("empty a_p table");
    if (line != "# curve=" + expect.to_string() + " version=1")
        throw usage_error("a_p table header mismatch");
    std::vector<LocalData> rows;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string p_s, ap_s, good_s;
        if (!std::getline(ls, p_s, '\t') || !std::getline(ls, ap_s, '\t') ||
            !std::getline(ls, good_s))
            throw usage_error("malformed a_p table row: " + line);
        LocalData d;
        d.p = parse_u64(p_s, "a_p table p");
        d.good = good_s == "1";
        d.a_p = (ap_s == "-") ? 0 : static_cast<i64>(std::stoll(ap_s));
        d.n_p = d.good ? d.p + 1 - d.a_p : 0;
        if (d.good) d.traces = {d.a_p};
        rows.push_back(d);
    }
    return rows;
}

std::vector<LocalData> ap_rows_cached(const RunConfig& cfg, const CurveQ& c, u64 pmax) {
    fs::path cache = fs::path(cfg.out) / "cache" / ("ap_" + curve_tag(c) + ".tsv");
    std::vector<u64> primes = primes_up_to(pmax);

    if (fs::exists(cache)) {
        std::ifstream f(cache, std::ios::binary);
        std::stringstream buf;
        buf << f.rdbuf();
        try {
            std::vector<LocalData> rows = parse_ap_table(buf.str(), c);
            size_t covered = 0;
            for (const auto& r : rows)
                if (r.p <= pmax) ++covered;
            if (covered == primes.size()) {
                rows.erase(std::remove_if(rows.begin(), rows.end(),
                                          [&](const LocalData& r) { return r.p > pmax; }),
                           rows.end());
                return rows;
            }
        } catch (const std::exception&) {
            // stale or foreign cache: fall through and rebuild
        }
    }

    std::vector<LocalData> rows = local_data_batch(c, primes, 1);
    write_file(cache, ap_table_text(c, rows));
    return rows;
}

// --- report payloads ----------------------------------------------------------

namespace {

void emit_taylor_fields(JsonWriter& w, const RunConfig& cfg, const TaylorEstimate& est) {
    w.key("T").value(cfg.T);
    w.key("h").value(cfg.h);
    w.key("tau").value(cfg.tau);
    w.key("c").begin_array();
    for (double v : est.c) w.value(v);
    w.end_array();
    w.key("analytic_rank").value(est.analytic_rank);
    w.key("leading").value(est.leading);
}

void emit_experiments(JsonWriter& w, const RunConfig& cfg,
                      const std::vector<LocalData>& rows) {
    w.key("experiments").begin_object();
    w.key("thm1").begin_array();
    for (double e : cfg.eps) {
        w.begin_object();
        w.key("eps").value(e);
        w.key("P").value(cfg.pmax);
        w.key("value").value(thm1_partial_product(rows, e, cfg.pmax));
        w.end_object();
    }
    w.end_array();
    w.key("k1").begin_object();
    w.key("N").value(cfg.k1_N);
    w.key("exact_mertens").value(k1_partial({cfg.c.front(), cfg.k1_N}, K1Mode::ExactMertens));
    w.key("variants").begin_array();
    for (double cv : cfg.c) {
        w.begin_object();
        w.key("c").value(cv);
        w.key("paper_substitution").value(k1_partial({cv, cfg.k1_N}, K1Mode::PaperSubstitution));
        w.key("closed_form").value(k1_closed_form(cv));
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();   // experiments
}

void emit_rank_fields(JsonWriter& w, const RankReport& r) {
    w.key("torsion").begin_object();
    w.key("structure").value(r.torsion.structure);
    w.key("points").begin_array();
    for (const auto& P : r.torsion.elements) w.value(P.to_string());
    w.end_array();
    w.end_object();
    w.key("generators").begin_array();
    for (const auto& P : r.generators) w.value(P.to_string());
    w.end_array();
    w.key("rank_lower_bound").value(r.rank_lower_bound);
    w.key("search_height").value(r.search_height);
    w.key("truncated").value(r.truncated);
}

GridConfig grid_of(const RunConfig& cfg) {
    GridConfig g;
    g.h = cfg.h;
    g.K = cfg.K;
    g.tau = cfg.tau;
    g.T = cfg.T;
    return g;
}

} // namespace

std::string lfun_report_text(const RunConfig& cfg) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    u64 need = std::max(cfg.T, cfg.pmax);
    std::vector<LocalData> rows = ap_rows_cached(cfg, curve, need);

    DirichletCoeffs coeffs = dirichlet_coeffs_from(cfg.T, rows);
    auto L = [&coeffs](double s) { return l_truncated(coeffs, s); };
    TaylorEstimate est = taylor_from_evaluator(L, grid_of(cfg));

    JsonWriter w;
    w.begin_object();
    w.key("curve").value(curve.to_string());
    emit_taylor_fields(w, cfg, est);
    emit_experiments(w, cfg, rows);
    w.end_object();
    return w.str() + "\n";
}

std::string rank_report_text(const RunConfig& cfg) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    RankReport r = rank_search(curve, cfg.height, cfg.relmax);
    JsonWriter w;
    w.begin_object();
    w.key("curve").value(curve.to_string());
    emit_rank_fields(w, r);
    w.end_object();
    return w.str() + "\n";
}

std::string bsd_report_text(const RunConfig& cfg) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    u64 need = std::max(cfg.T, cfg.pmax);
    std::vector<LocalData> rows = ap_rows_cached(cfg, curve, need);

    DirichletCoeffs coeffs = dirichlet_coeffs_from(cfg.T, rows);
    auto L = [&coeffs](double s) { return l_truncated(coeffs, s); };
    TaylorEstimate est = taylor_from_evaluator(L, grid_of(cfg));
    RankReport r = rank_search(curve, cfg.height, cfg.relmax);

    JsonWriter w;
    w.begin_object();
    w.key("curve").value(curve.to_string());
    w.key("analytic").begin_object();
    emit_taylor_fields(w, cfg, est);
    w.end_object();
    w.key("algebraic").begin_object();
    emit_rank_fields(w, r);
    w.end_object();
    w.key("verdict").begin_object();
    w.key("analytic_rank").value(est.analytic_rank);
    w.key("rank_lower_bound").value(r.rank_lower_bound);
    w.key("analytic_at_least_algebraic").value(est.analytic_rank >= r.rank_lower_bound);
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

std::string k1_report_text(const RunConfig& cfg) {
    cfg.validate();
    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.k1_N);
    w.key("exact_mertens").value(k1_partial({cfg.c.front(), cfg.k1_N}, K1Mode::ExactMertens));
    w.key("variants").begin_array();
    for (double cv : cfg.c) {
        w.begin_object();
        w.key("c").value(cv);
        w.key("paper_substitution").value(k1_partial({cv, cfg.k1_N}, K1Mode::PaperSubstitution));
        w.key("closed_form").value(k1_closed_form(cv));
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

// --- commands -----------------------------------------------------------------

void cmd_info(const RunConfig& cfg, std::ostream& os) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    os << "curve: A=" << curve.A().get_str() << " B=" << curve.B().get_str()
       << "  (y^2 = x^3 - A x - B)\n";
    os << "discriminant: " << curve.discriminant().get_str() << "\n";
    os << "bad primes <= " << cfg.pmax << ":";
    bool any = false;
    for (u64 p : primes_up_to(cfg.pmax)) {
        BigInt pz(static_cast<unsigned long>(p));
        if (mpz_divisible_p(curve.discriminant().get_mpz_t(), pz.get_mpz_t())) {
            os << " " << p;
            any = true;
        }
    }
    if (!any) os << " none";
    os << "\n";
    TorsionGroup t = torsion_subgroup(curve);
    os << "torsion: " << t.structure << ", order " << t.order() << "\n";
}

std::filesystem::path cmd_ap_table(const RunConfig& cfg) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    std::vector<LocalData> rows = ap_rows_cached(cfg, curve, cfg.pmax);
    fs::path path = fs::path(cfg.out) / ("ap_table_" + curve_tag(curve) + ".tsv");
    write_file(path, ap_table_text(curve, rows));
    return path;
}

void cmd_zeta_local(const RunConfig& cfg, u64 p, double s, std::ostream& os) {
    cfg.validate();
    CurveQ curve = cfg.parse_curve();
    LocalData d = local_data(curve, p, 3);
    JsonWriter w;
    w.begin_object();
    w.key("curve").value(curve.to_string());
    w.key("p").value(p);
    w.key("good").value(d.good);
    w.key("a_p").value(d.a_p);
    w.key("n_p").value(d.n_p);
    w.key("s").value(s);
    w.key("value").value(zeta_local_eval(d, s));
    w.key("series").begin_array();
    if (d.good)
        for (i64 n : zeta_series_coeffs(d, 3)) w.value(n);
    w.end_array();
    w.key("rationality_ok").value(d.good ? verify_rationality(d, 3) : true);
    w.end_object();
    os << w.str() << "\n";
}

std::filesystem::path cmd_lfun(const RunConfig& cfg) {
    fs::path path = fs::path(cfg.out) / ("lfun_" + curve_tag(cfg.parse_curve()) + ".json");
    write_file(path, lfun_report_text(cfg));
    return path;
}

std::filesystem::path cmd_rank(const RunConfig& cfg) {
    fs::path path = fs::path(cfg.out) / ("rank_" + curve_tag(cfg.parse_curve()) + ".json");
    write_file(path, rank_report_text(cfg));
    return path;
}

std::filesystem::path cmd_bsd_report(const RunConfig& cfg) {
    fs::path path = fs::path(cfg.out) / ("bsd_" + curve_tag(cfg.parse_curve()) + ".json");
    write_file(path, bsd_report_text(cfg));
    return path;
}

std::vector<std::filesystem::path> cmd_thm1(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.eps.empty()) throw usage_error("thm1 needs a nonempty eps list");
    CurveQ curve = cfg.parse_curve();
    std::vector<LocalData> rows = ap_rows_cached(cfg, curve, cfg.pmax);

    std::vector<fs::path> written;
    std::string tag = curve_tag(curve);

    for (double e : cfg.eps) {
        // cumulative partial product after each good prime, for plotting
        std::string data;
        double value = -0.5;
        for (const auto& row : rows) {
            if (!row.good) continue;
            value *= thm1_factor(row, e);
            data += std::to_string(row.p);
            data += ' ';
            data += format_double(value);
            data += '\n';
        }
        fs::path dpath = fs::path(cfg.out) / ("thm1_" + tag + "_eps" + format_double(e) + ".dat");
        write_file(dpath, data);
        written.push_back(dpath);
    }

    JsonWriter w;
    w.begin_object();
    w.key("curve").value(curve.to_string());
    w.key("P").value(cfg.pmax);
    w.key("thm1").begin_array();
    for (double e : cfg.eps) {
        w.begin_object();
        w.key("eps").value(e);
        w.key("P").value(cfg.pmax);
        w.key("value").value(thm1_partial_product(rows, e, cfg.pmax));
        w.end_object();
    }
    w.end_array();
    w.key("k1").begin_object();
    w.key("N").value(cfg.k1_N);
    w.key("exact_mertens").value(k1_partial({cfg.c.front(), cfg.k1_N}, K1Mode::ExactMertens));
    w.key("variants").begin_array();
    for (double cv : cfg.c) {
        w.begin_object();
        w.key("c").value(cv);
        w.key("paper_substitution").value(k1_partial({cv, cfg.k1_N}, K1Mode::PaperSubstitution));
        w.key("closed_form").value(k1_closed_form(cv));
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();
    fs::path spath = fs::path(cfg.out) / ("thm1_" + tag + ".json");
    write_file(spath, w.str() + "\n");
    written.push_back(spath);
    return written;
}

std::filesystem::path cmd_k1(const RunConfig& cfg) {
    fs::path path = fs::path(cfg.out) / "k1.json";
    write_file(path, k1_report_text(cfg));
    return path;
}

} // namespace ecbsd
