// ecbsd: desk-scale elliptic curve L-function and rank toolkit.
//
// Subcommands: info, ap-table, zeta-local, lfun, rank, bsd-report, thm1, k1.
// Options come from defaults, then an optional key=value config file, then
// command-line flags (flags win). Identical configs produce byte-identical
// output files.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ecbsd/report.hpp"

namespace {

struct FlagSet {
    std::optional<std::string> curve, config, out, eps, c;
    std::optional<ecbsd::u64> pmax, T, height, k1N, p;
    std::optional<double> h, tau, s;
    std::optional<int> K, relmax;
};

std::vector<double> split_doubles(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ecbsd::usage_error(std::string("bad ") + what + " entry: \"" + item + "\"");
        }
    }
    if (out.empty()) throw ecbsd::usage_error(std::string("empty ") + what + " list");
    return out;
}

ecbsd::RunConfig build_config(const FlagSet& f) {
    ecbsd::RunConfig cfg;
    if (f.config) cfg = ecbsd::load_config_file(*f.config, cfg);
    if (f.curve) cfg.curve = *f.curve;
    if (f.out) cfg.out = *f.out;
    if (f.pmax) cfg.pmax = *f.pmax;
    if (f.T) cfg.T = *f.T;
    if (f.h) cfg.h = *f.h;
    if (f.tau) cfg.tau = *f.tau;
    if (f.K) cfg.K = *f.K;
    if (f.height) cfg.height = *f.height;
    if (f.relmax) cfg.relmax = *f.relmax;
    if (f.eps) cfg.eps = split_doubles(*f.eps, "eps");
    if (f.c) cfg.c = split_doubles(*f.c, "c");
    if (f.k1N) cfg.k1_N = *f.k1N;
    return cfg;
}

void add_common_options(CLI::App* sub, FlagSet& f) {
    sub->add_option("--curve", f.curve, "curve as \"A,B\" for y^2 = x^3 - A x - B");
    sub->add_option("--config", f.config, "key=value config file (flags override it)");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--pmax", f.pmax, "prime bound");
    sub->add_option("--T", f.T, "Dirichlet series truncation");
    sub->add_option("--grid-h", f.h, "Taylor grid step");
    sub->add_option("--tau", f.tau, "rank threshold on |c_n|");
    sub->add_option("--K", f.K, "highest Taylor coefficient");
    sub->add_option("--height", f.height, "rational point search height");
    sub->add_option("--relmax", f.relmax, "relation coefficient bound");
    sub->add_option("--eps", f.eps, "comma-separated eps list");
    sub->add_option("--c", f.c, "comma-separated c list (each > 1)");
    sub->add_option("--k1-N", f.k1N, "partial-sum bound for the k1 experiment");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic curve L-function and rank toolkit"};
    app.require_subcommand(1);

    FlagSet f;
    auto* info = app.add_subcommand("info", "curve summary: discriminant, bad primes, torsion");
    auto* ap = app.add_subcommand("ap-table", "write the a_p TSV table for p <= pmax");
    auto* zl = app.add_subcommand("zeta-local", "local zeta data at one prime");
    auto* lf = app.add_subcommand("lfun", "L-series Taylor report with experiments");
    auto* rk = app.add_subcommand("rank", "torsion, point search and rank lower bound");
    auto* bsd = app.add_subcommand("bsd-report", "combined analytic/algebraic report");
    auto* t1 = app.add_subcommand("thm1", "eps-product experiment tables and plot data");
    auto* k1 = app.add_subcommand("k1", "Mertens-sum experiment");
    for (CLI::App* sub : {info, ap, zl, lf, rk, bsd, t1, k1}) add_common_options(sub, f);
    zl->add_option("--p", f.p, "prime")->required();
    zl->add_option("--s", f.s, "evaluation point")->required();

    try {
        app.parse(argc, argv);
        ecbsd::RunConfig cfg = build_config(f);
        if (info->parsed()) {
            ecbsd::cmd_info(cfg, std::cout);
        } else if (ap->parsed()) {
            std::cout << ecbsd::cmd_ap_table(cfg).string() << "\n";
        } else if (zl->parsed()) {
            ecbsd::cmd_zeta_local(cfg, *f.p, *f.s, std::cout);
        } else if (lf->parsed()) {
            std::cout << ecbsd::cmd_lfun(cfg).string() << "\n";
        } else if (rk->parsed()) {
            std::cout << ecbsd::cmd_rank(cfg).string() << "\n";
        } else if (bsd->parsed()) {
            std::cout << ecbsd::cmd_bsd_report(cfg).string() << "\n";
        } else if (t1->parsed()) {
            for (const auto& path : ecbsd::cmd_thm1(cfg)) std::cout << path.string() << "\n";
        } else if (k1->parsed()) {
            std::cout << ecbsd::cmd_k1(cfg).string() << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ecbsd::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ecbsd::refusal_error& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const ecbsd::internal_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
