// asjet: ramification jumps of degree-p Artin-Schreier covers of a
// two-dimensional local ring along curve jets, their strata and asymptotics.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "asjet/asympt.hpp"
#include "asjet/coverfile.hpp"

using namespace asjet;
using nlohmann::json;

namespace {

uint64_t default_cap() {
    if (const char* env = std::getenv("ASJET_ENUM_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw DomainError("ASJET_ENUM_CAP must be a positive integer");
    }
    return uint64_t(1) << 20;
}

std::string method_name(GenericMethod m) {
    switch (m) {
        case GenericMethod::ClosedForm: return "closed_form";
        case GenericMethod::Exhaustive: return "exhaustive";
        case GenericMethod::SampledLowerBound: return "sampled_lower_bound";
    }
    return "?";
}

std::string case_name(GenericCase c) {
    switch (c) {
        case GenericCase::None: return "out_of_closed_form_range";
        case GenericCase::PrimeToMNoDiv: return "p_prime_to_m_nodiv";
        case GenericCase::PrimeToMDiv: return "p_prime_to_m_div";
        case GenericCase::PDividesM: return "p_divides_m";
    }
    return "?";
}

// jet argument: inline "x:.."/"t:r:..", or @path to a curve file that gets
// Weierstrass-normalized against the cover
CurveJet resolve_jet(const LoadedCover& lc, const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        std::string path = spec.substr(1);
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open curve file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        auto curve = parse_curve_text(lc.cover.field(), buf.str(), path);
        // discover the contact order first, then cut to the needed length
        auto probe = normalize_curve(lc.cover.field(), curve, lc.cover.d(), 1);
        int len = required_jet_length(lc.cover, probe.r());
        return normalize_curve(lc.cover.field(), curve, lc.cover.d(), len);
    }
    return parse_jet(lc.cover.field(), spec);
}

// Default r-range for verify: desk scale (rm+n <= 8) within the cap.
// An explicit --rmax overrides it.
int all_admissible_rmax(const CoverSpec& cover, uint64_t cap) {
    int rmax = 0;
    for (int r = 1; r * cover.m() + cover.n() <= 8; ++r) {
        int M = required_jet_length(cover, r);
        uint64_t size;
        try {
            size = jet_space_size(*cover.field(), jet_kind_for(cover, r), M);
        } catch (const DomainError&) {
            break;
        }
        if (size > cap) break;
        rmax = r;
    }
    if (rmax == 0) throw DomainError("enumeration cap too small for any regime r");
    return rmax;
}

void cmd_jump(const LoadedCover& lc, const std::string& jet_spec, bool as_json) {
    CurveJet jet = resolve_jet(lc, jet_spec);
    auto report = jump_on_curve(lc.cover, jet);
    auto restricted = restrict_to_curve(lc.cover, jet);
    if (as_json) {
        json j;
        j["h"] = report.h;
        j["jet"] = jet.str();
        j["restricted"] = restricted.str();
        json red = json::object();
        for (const auto& [l, c] : report.reduced.terms) red[std::to_string(l)] = c.str();
        j["reduced"] = red;
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::cout << "h\t" << report.h << '\n';
    std::cout << "jet\t" << jet.str() << '\n';
    std::cout << "restricted\t" << restricted.str() << '\n';
    for (const auto& [l, c] : report.reduced.terms)
        std::cout << "reduced\t" << l << '\t' << c.str() << '\n';
}

void write_strata(std::ostream& os, const CoverSpec& cover, const StrataSystem& sys,
                  int s) {
    os << "r " << sys.r << '\n';
    os << "m " << sys.m << '\n';
    os << "n " << sys.n << '\n';
    os << "p " << cover.field()->p() << '\n';
    os << "e " << cover.field()->e() << '\n';
    auto polys = clear_strata_polys(sys, s);
    for (const auto& c : polys) os << "N " << c.l << ' ' << c.clear_exp << '\n';
    for (const auto& c : polys) {
        os << "S " << c.l << '\n';
        os << c.poly.str();
    }
}

void cmd_strata(const LoadedCover& lc, int r, int s, const std::string& out,
                bool as_json) {
    auto sys = build_strata_system(lc.cover, r);
    if (s > sys.cap) throw DomainError("stratum level s exceeds rm+n");
    std::ostringstream os;
    if (as_json) {
        json j;
        j["r"] = sys.r;
        j["m"] = sys.m;
        j["n"] = sys.n;
        j["p"] = lc.cover.field()->p();
        j["e"] = lc.cover.field()->e();
        json blocks = json::array();
        for (const auto& c : clear_strata_polys(sys, s)) {
            json b;
            b["l"] = c.l;
            b["N"] = c.clear_exp;
            json terms = json::array();
            for (const auto& t : c.poly.terms()) {
                json tt;
                tt["c"] = t.c.str();
                tt["exps"] = t.exps;
                terms.push_back(tt);
            }
            b["terms"] = terms;
            blocks.push_back(b);
        }
        j["strata"] = blocks;
        os << j.dump(2) << '\n';
    } else {
        write_strata(os, lc.cover, sys, s);
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out);
        if (!f) throw DomainError("cannot write '" + out + "'");
        f << os.str();
    }
}

void cmd_generic(const LoadedCover& lc, int r, const GenericOptions& opts,
                 bool as_json) {
    auto rep = generic_jump(lc.cover, r, opts);
    if (as_json) {
        json j;
        j["r"] = rep.r;
        j["h"] = rep.h_r;
        j["pivot_j"] = rep.pivot_j;
        j["method"] = method_name(rep.method);
        j["case"] = case_name(rep.case_kind);
        j["slope"] = {{"num", rep.slope_num}, {"den", rep.slope_den}};
        if (rep.witness) j["witness"] = rep.witness->str();
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::cout << "r\t" << rep.r << '\n';
    std::cout << "h\t" << rep.h_r << '\n';
    std::cout << "pivot_j\t" << rep.pivot_j << '\n';
    std::cout << "method\t" << method_name(rep.method) << '\n';
    std::cout << "case\t" << case_name(rep.case_kind) << '\n';
    std::cout << "slope\t" << rep.slope_num << '/' << rep.slope_den << '\n';
    if (rep.witness) std::cout << "witness\t" << rep.witness->str() << '\n';
}

void cmd_asymptote(const LoadedCover& lc, int rmax, const GenericOptions& opts,
                   bool as_json) {
    auto rep = asymptotic_slope(lc.cover, rmax, opts);
    if (as_json) {
        json j;
        j["m"] = rep.m;
        j["pivot_j"] = rep.pivot_j;
        j["limit"] = rep.limit;
        j["envelope_ok"] = rep.envelope_ok;
        json rows = json::array();
        for (const auto& row : rep.rows)
            rows.push_back({{"r", row.r},
                            {"h", row.h},
                            {"num", row.num},
                            {"den", row.den},
                            {"method", method_name(row.method)}});
        j["rows"] = rows;
        std::cout << j.dump(2) << '\n';
        return;
    }
    for (const auto& row : rep.rows)
        std::cout << row.r << '\t' << row.h << '\t' << row.num << '\t' << row.den
                  << '\n';
}

void cmd_enumerate(const LoadedCover& lc, int r, uint64_t cap, bool as_json) {
    CurveJet::Kind kind = jet_kind_for(lc.cover, r);
    int M = required_jet_length(lc.cover, r);
    uint64_t total = jet_space_size(*lc.cover.field(), kind, M);
    if (total > cap)
        throw DomainError("enumeration cap exceeded: " + std::to_string(total) +
                          " jets > cap " + std::to_string(cap));
    json rows = json::array();
    for (uint64_t rank = 0; rank < total; ++rank) {
        auto jet = jet_at(*lc.cover.field(), kind, r, M, rank);
        int h = jump_on_curve(lc.cover, jet).h;
        if (as_json)
            rows.push_back({{"jet", jet.str()}, {"h", h}});
        else
            std::cout << jet.str() << '\t' << h << '\n';
    }
    if (as_json) std::cout << rows.dump(2) << '\n';
}

struct VerifyResult {
    uint64_t checks = 0;
    uint64_t violations = 0;
    json details = json::array();
};

VerifyResult verify_usu(const LoadedCover& lc, int rmax, uint64_t cap) {
    VerifyResult res;
    for (int r = 1; r <= rmax; ++r) {
        int bound = sufficient_jet_order(lc.cover, r, JetOrderMode::Bound);
        int ex = sufficient_jet_order(lc.cover, r, JetOrderMode::Exhaustive, cap);
        ++res.checks;
        if (ex > bound) ++res.violations;
        res.details.push_back({{"r", r}, {"exhaustive", ex}, {"bound", bound}});
    }
    return res;
}

VerifyResult verify_semicont_cmd(const LoadedCover& lc, int rmax, uint64_t cap) {
    VerifyResult res;
    for (int r = 1; r <= rmax; ++r) {
        auto sys = build_strata_system(lc.cover, r);
        auto scan = build_strata_scan(lc.cover, sys, cap);
        uint64_t prev_members = 0;
        for (int s = 0; s <= sys.cap; ++s) {
            uint16_t high = 0;
            for (size_t k = 0; k < scan.support.size(); ++k)
                if (scan.support[k] >= s + 1) high |= uint16_t(1u << k);
            uint64_t mismatches = 0, members = 0;
            for (uint64_t rank = 0; rank < scan.jumps.h.size(); ++rank) {
                bool in_by_jump = scan.jumps.h[rank] <= s;
                bool in_by_g = (scan.g_nonzero_mask[rank] & high) == 0;
                bool in_by_s = (scan.s_nonzero_mask[rank] & high) == 0;
                if (in_by_jump != in_by_g || in_by_g != in_by_s) ++mismatches;
                if (in_by_jump) ++members;
            }
            ++res.checks;
            if (mismatches != 0 || members < prev_members) ++res.violations;
            res.details.push_back({{"r", r},
                                   {"s", s},
                                   {"members", members},
                                   {"mismatches", mismatches}});
            prev_members = members;
        }
    }
    return res;
}

VerifyResult verify_gener(const LoadedCover& lc, int rmax, uint64_t cap,
                          uint64_t seed) {
    VerifyResult res;
    int j = pivot_index(lc.cover);
    for (int r = 1; r <= rmax; ++r) {
        int bound = jet_kind_for(lc.cover, r) == CurveJet::Kind::Transversal
                        ? lc.cover.m()
                        : r * lc.cover.m() + lc.cover.n();
        uint64_t size = jet_space_size(*lc.cover.field(), jet_kind_for(lc.cover, r),
                                       required_jet_length(lc.cover, r));
        bool exhaustive = size <= cap;
        int observed = exhaustive
                           ? generic_jump_sampled(lc.cover, r, 0, 0, true, cap)
                           : generic_jump_sampled(lc.cover, r, 4000, seed);
        ++res.checks;
        bool bad = observed > bound;
        if (r > std::max(1, j) && exhaustive) {
            auto rep = generic_jump(lc.cover, r);
            if (rep.h_r != observed) bad = true;
        }
        if (bad) ++res.violations;
        res.details.push_back({{"r", r},
                               {"observed", observed},
                               {"bound", bound},
                               {"exhaustive", exhaustive}});
    }
    return res;
}

VerifyResult verify_asymp(const LoadedCover& lc, int rmax, uint64_t cap,
                          uint64_t seed) {
    VerifyResult res;
    GenericOptions opts;
    opts.cap = cap;
    opts.seed = seed;
    auto rep = asymptotic_slope(lc.cover, rmax, opts);
    ++res.checks;
    if (!rep.envelope_ok) ++res.violations;
    ++res.checks;
    if (rep.limit != lc.cover.m()) ++res.violations;
    for (const auto& row : rep.rows)
        res.details.push_back({{"r", row.r},
                               {"h", row.h},
                               {"num", row.num},
                               {"den", row.den},
                               {"method", method_name(row.method)}});
    return res;
}

int cmd_verify(const LoadedCover& lc, const std::string& theorem, int rmax,
               uint64_t cap, uint64_t seed, bool as_json) {
    if (rmax <= 0) rmax = all_admissible_rmax(lc.cover, cap);
    VerifyResult res;
    if (theorem == "usu") {
        res = verify_usu(lc, rmax, cap);
    } else if (theorem == "semicont") {
        res = verify_semicont_cmd(lc, rmax, cap);
    } else if (theorem == "gener") {
        res = verify_gener(lc, rmax, cap, seed);
    } else if (theorem == "asymp") {
        res = verify_asymp(lc, rmax, cap, seed);
    } else {
        throw DomainError("unknown theorem '" + theorem +
                          "' (expected usu|semicont|gener|asymp)");
    }
    if (as_json) {
        json j;
        j["theorem"] = theorem;
        j["checks"] = res.checks;
        j["violations"] = res.violations;
        j["details"] = res.details;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& d : res.details) std::cout << d.dump() << '\n';
        std::cout << "checks\t" << res.checks << '\n';
        std::cout << "violations\t" << res.violations << '\n';
    }
    return res.violations == 0 ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "asjet: ramification jumps of Artin-Schreier surface covers along curve "
        "jets"};
    app.require_subcommand(1);

    std::string cover_path, jet_spec, theorem, out_path;
    int r = 1, s = 0, rmax = 0;
    uint64_t trials = 0, seed = 0, cap = 0;
    bool as_json = false, exhaustive = false;

    auto add_common = [&](CLI::App* sub, bool with_cap = true) {
        sub->add_option("--cover", cover_path, "cover-spec file")->required();
        sub->add_flag("--json", as_json, "machine-readable output");
        if (with_cap)
            sub->add_option("--cap", cap, "enumeration cap (default ASJET_ENUM_CAP)");
    };

    auto* jump = app.add_subcommand("jump", "jump along one curve");
    add_common(jump, false);
    jump->add_option("--jet", jet_spec, "jet ('x:..', 't:r:..') or @curve-file")
        ->required();

    auto* strata = app.add_subcommand("strata", "export cleared strata polynomials");
    add_common(strata, false);
    strata->add_option("-r", r, "jet regime")->required();
    strata->add_option("-s", s, "stratum level (export l >= s+1)");
    strata->add_option("-o", out_path, "output file (default stdout)");

    auto* generic = app.add_subcommand("generic", "generic jump h_r");
    add_common(generic);
    generic->add_option("-r", r, "jet regime")->required();
    generic->add_flag("--exhaustive", exhaustive, "fallback: enumerate all jets");
    generic->add_option("--trials", trials, "fallback: sample this many jets");
    generic->add_option("--seed", seed, "seed for sampled paths");

    auto* asym = app.add_subcommand("asymptote", "slope table h_r / r");
    add_common(asym);
    asym->add_option("--rmax", rmax, "largest regime r")->required();
    asym->add_option("--trials", trials, "sampling depth for infeasible r");
    asym->add_option("--seed", seed, "seed for sampled paths");

    auto* verify = app.add_subcommand("verify", "run a theorem's acceptance check");
    add_common(verify);
    verify->add_option("--theorem", theorem, "usu|semicont|gener|asymp")->required();
    verify->add_option("--rmax", rmax, "largest regime r (default: cap-admissible)");
    verify->add_option("--seed", seed, "seed for sampled paths");

    auto* enumerate = app.add_subcommand("enumerate", "dump the jet -> h table");
    add_common(enumerate);
    enumerate->add_option("-r", r, "jet regime")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the message; 0 for --help
        return code == 0 ? 0 : 1;
    }

    try {
        if (cap == 0) cap = default_cap();
        LoadedCover lc = load_cover_path(cover_path);
        if (jump->parsed()) {
            cmd_jump(lc, jet_spec, as_json);
        } else if (strata->parsed()) {
            cmd_strata(lc, r, s, out_path, as_json);
        } else if (generic->parsed()) {
            GenericOptions opts;
            opts.cap = cap;
            opts.seed = seed;
            if (exhaustive)
                opts.fallback = GenericOptions::Fallback::Exhaustive;
            else if (trials > 0) {
                opts.fallback = GenericOptions::Fallback::Sampled;
                opts.trials = trials;
            }
            cmd_generic(lc, r, opts, as_json);
        } else if (asym->parsed()) {
            GenericOptions opts;
            opts.cap = cap;
            opts.seed = seed;
            if (trials > 0) opts.trials = trials;
            cmd_asymptote(lc, rmax, opts, as_json);
        } else if (verify->parsed()) {
            return cmd_verify(lc, theorem, rmax, cap, seed, as_json);
        } else if (enumerate->parsed()) {
            cmd_enumerate(lc, r, cap, as_json);
        }
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << '\n';
        return 2;
    } catch (const PrecisionError& err) {
        std::cerr << "precision error: " << err.what() << '\n';
        return 3;
    } catch (const DomainError& err) {
        std::cerr << "domain error: " << err.what() << '\n';
        return 4;
    } catch (const InternalError& err) {
        std::cerr << "internal error (bug): " << err.what() << '\n';
        return 6;
    } catch (const std::exception& err) {
        std::cerr << "internal error (bug): " << err.what() << '\n';
        return 6;
    }
    return 0;
}
