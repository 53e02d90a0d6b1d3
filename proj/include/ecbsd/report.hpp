#ifndef ECBSD_REPORT_HPP
#define ECBSD_REPORT_HPP

// Front-door plumbing: run configuration (key=value file + flag overrides),
// the persistent a_p cache, and the deterministic TSV/JSON/plot writers
// behind the CLI subcommands. All floats are serialized with 15 significant
// digits and all field orders are fixed, so identical configs produce
// byte-identical files.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecbsd/lfunction.hpp"
#include "ecbsd/point_count.hpp"
#include "ecbsd/rank_search.hpp"

namespace ecbsd {

struct RunConfig {
    std::string curve = "1,0";            // "A,B"
    u64 pmax = 100;
    u64 T = 100'000;
    double h = 0.05;
    double tau = 0.2;
    int K = 3;
    u64 height = 10'000;
    int relmax = 8;
    std::vector<double> eps = {0.1, 0.01, 0.001};
    std::vector<double> c = {1.1, 1.2, 1.3};
    u64 k1_N = 100'000;
    std::string out = ".";

    CurveQ parse_curve() const { return CurveQ::parse(curve); }
    void validate() const;                // budget / range checks
};

/// key=value lines, '#' comments; unknown keys rejected.
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Serialize a double with 15 significant digits ("%.15g").
std::string format_double(double v);

/// Minimal ordered JSON writer (objects keep insertion order).
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v);
    JsonWriter& value(double v);
    JsonWriter& value(i64 v);
    JsonWriter& value(u64 v);
    JsonWriter& value(int v);
    JsonWriter& value(bool v);
    std::string str() const { return out_; }

private:
    void comma_if_needed();
    std::string out_;
    std::vector<bool> first_;   // per open scope
    bool pending_key_ = false;
};

// --- a_p persistence (TSV) ---------------------------------------------------
// Header "# curve=A,B version=1", rows "p<TAB>a_p<TAB>good" sorted by p;
// the a_p column carries "-" on bad-prime rows.

std::string ap_table_text(const CurveQ& c, const std::vector<LocalData>& rows);
std::vector<LocalData> parse_ap_table(const std::string& text, const CurveQ& expect);

/// Cached a_p lookup: reads <out>/cache/ap_<tag>.tsv when it covers pmax,
/// otherwise computes, rewrites the cache, and returns the rows for p <= pmax.
std::vector<LocalData> ap_rows_cached(const RunConfig& cfg, const CurveQ& c, u64 pmax);

/// Filesystem tag for a curve: "A_B" with '-' spelled "m".
std::string curve_tag(const CurveQ& c);

// --- subcommands -------------------------------------------------------------

void cmd_info(const RunConfig& cfg, std::ostream& os);
std::filesystem::path cmd_ap_table(const RunConfig& cfg);
void cmd_zeta_local(const RunConfig& cfg, u64 p, double s, std::ostream& os);
std::filesystem::path cmd_lfun(const RunConfig& cfg);
std::filesystem::path cmd_rank(const RunConfig& cfg);
std::filesystem::path cmd_bsd_report(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_thm1(const RunConfig& cfg);
std::filesystem::path cmd_k1(const RunConfig& cfg);

// Report payloads as strings (exposed for tests).
std::string lfun_report_text(const RunConfig& cfg);
std::string rank_report_text(const RunConfig& cfg);
std::string bsd_report_text(const RunConfig& cfg);
std::string k1_report_text(const RunConfig& cfg);

} // namespace ecbsd

#endif
