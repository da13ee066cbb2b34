// Command-line front end: builds the configured root datum, Levi subset and
// structural map, then runs decomposition, block, verification, or dump jobs
// with deterministic JSON or CSV output.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bv/ajsk.hpp"
#include "bv/linkage.hpp"

using json = nlohmann::json;
using namespace bv;

namespace {

struct JobConfig {
    std::string type = "A1";
    std::int64_t p = 3;
    std::vector<int> levi;
    std::string pi = "zero"; // "zero" | "generic" | comma-separated integers
    std::string box;         // "lo:hi,lo:hi" half-open per coordinate
    std::string suite;
    std::string out;
    std::string format = "json";
};

int rank_of_type(const std::string& t) {
    if (t == "A1") return 1;
    if (t == "A2" || t == "B2") return 2;
    throw std::invalid_argument("unknown root datum type: " + t);
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Box parse_box(const std::string& s, const RootDatum& d) {
    if (s.empty()) return fundamental_box(d);
    Box b;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto colon = part.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("box: expected lo:hi pairs");
        b.range.push_back({std::stoll(part.substr(0, colon)), std::stoll(part.substr(colon + 1))});
    }
    if (static_cast<int>(b.range.size()) != d.rank)
        throw std::invalid_argument("box: one lo:hi pair per simple root required");
    for (auto& [lo, hi] : b.range)
        if (lo >= hi) throw std::invalid_argument("box: empty coordinate range");
    return b;
}

json weight_json(const Weight& w) {
    json a = json::array();
    for (auto c : w) a.push_back(c);
    return a;
}

std::string weight_str(const Weight& w) {
    std::string s = "(";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(w[i]);
    }
    return s + ")";
}

json scalar_json(const Fp& x) { return x.v; }
json scalar_json(const RatFunc& x) { return x.str("s"); }

template <class K>
json module_json(const GradedModule<K>& M) {
    json j;
    j["dim"] = M.dim();
    j["lambda"] = weight_json(M.lambda);
    j["twist"] = M.twist_w;
    json wts = json::array();
    for (const auto& w : M.xweight) wts.push_back(weight_json(w));
    j["weights"] = wts;
    json act;
    for (const auto& [r, A] : M.action) {
        json rows = json::array();
        for (int i = 0; i < A.rows; ++i) {
            json row = json::array();
            for (int c = 0; c < A.cols; ++c) row.push_back(scalar_json(A.at(i, c)));
            rows.push_back(row);
        }
        act["root_" + std::to_string(r)] = rows;
    }
    j["action"] = act;
    return j;
}

struct CheckList {
    std::vector<std::pair<std::string, bool>> checks;
    void add(const std::string& name, bool pass) { checks.push_back({name, pass}); }
    bool all() const {
        for (const auto& [n, p] : checks)
            if (!p) return false;
        return true;
    }
    json to_json() const {
        json arr = json::array();
        for (const auto& [n, p] : checks) arr.push_back({{"name", n}, {"pass", p}});
        return arr;
    }
};

// ---------------------------------------------------------------------------
// reports, templated over the scalar field
// ---------------------------------------------------------------------------

template <class K>
json decompose_report(AnalysisContext<K>& ctx, const Box& box, std::string* csv) {
    json rows = json::array();
    std::ostringstream cs;
    cs << "lambda;factor;factor_dim;multiplicity\n";
    for (const Weight& lam : box.enumerate()) {
        auto f = composition_factors(ctx, ctx.Z(lam));
        json row;
        row["lambda"] = weight_json(lam);
        json fs = json::array();
        std::int64_t total = 0;
        for (const auto& [lab, m] : f) {
            fs.push_back({{"label", weight_json(lab.nu)}, {"dim", lab.dim}, {"mult", m}});
            total += lab.dim * m;
            cs << weight_str(lam) << ";" << weight_str(lab.nu) << ";" << lab.dim << ";" << m
               << "\n";
        }
        row["factors"] = fs;
        row["dim"] = total;
        rows.push_back(row);
    }
    if (csv) *csv = cs.str();
    json j;
    j["rows"] = rows;
    return j;
}

template <class K>
json blocks_report(AnalysisContext<K>& ctx, const PiProfile& prof, const Box& box, bool* ok,
                   std::string* csv) {
    json j;
    auto classes = predicted_blocks(*ctx.d, *ctx.levi, prof, box);
    json cls = json::array();
    std::ostringstream cs;
    cs << "class;lambda\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        json one = json::array();
        for (const auto& w : classes[i]) {
            one.push_back(weight_json(w));
            cs << i << ";" << weight_str(w) << "\n";
        }
        cls.push_back(one);
    }
    j["classes"] = cls;
    auto rep = verify_linkage(ctx, prof, box);
    j["regime"] = rep.regime;
    j["containment_ok"] = rep.ok;
    j["violations"] = rep.violations;
    *ok = rep.ok;
    if (csv) *csv = cs.str();
    return j;
}

template <class K>
void suite_classification(AnalysisContext<K>& ctx, const PiProfile& prof, const Box& box,
                          CheckList& out) {
    std::vector<Weight> pts = box.enumerate();
    for (const Weight& lam : pts) {
        bool pass = true;
        for (const Weight& mu : pts) {
            bool predicted = predicted_iso(*ctx.d, *ctx.levi, prof, lam, mu);
            if (predicted != iso_test(ctx.Z(lam), ctx.Z(mu))) pass = false;
        }
        out.add("iso classification row " + weight_str(lam), pass);
    }
}

template <class K>
void suite_walls(AnalysisContext<K>& ctx, const Box& box, CheckList& out) {
    const RootDatum& d = *ctx.d;
    std::int64_t big = 1;
    for (int i = 1; i < d.num_positive; ++i) big *= d.p;
    for (const Weight& lam : box.enumerate())
        for (int a = 0; a < d.rank; ++a) {
            auto phi = intertwiner_phi(ctx, 0, a, lam);
            bool pass = check_module_map(*phi.src, *phi.dst, phi.mat).empty();
            int kerdim = phi.src->dim() - rank(phi.mat);
            pass = pass && kerdim == static_cast<int>((d.p - phi.d) * big);
            if (phi.d < d.p) {
                auto phip = intertwiner_phi_prime(ctx, 0, a, lam);
                pass = pass && (phi.mat * phip.mat).is_zero() && (phip.mat * phi.mat).is_zero();
                auto psi = intertwiner_psi(ctx, 0, a, lam);
                Matrix<K> im = row_space_basis(psi.mat.transpose());
                pass = pass && im.rows == kerdim && (phi.mat * psi.mat).is_zero();
            }
            out.add("wall maps at " + weight_str(lam) + " root " + std::to_string(a), pass);
        }
}

template <class K>
void suite_socle(AnalysisContext<K>& ctx, const Box& box, CheckList& out) {
    const LeviDatum& l = *ctx.levi;
    for (const Weight& lam : box.enumerate()) {
        bool pass = socle_check(ctx, ctx.Z(lam));
        Weight tw = lambda_twist(*ctx.d, l, l.w_upper_I, lam);
        pass = pass && socle_check(ctx, ctx.Zw(l.w_upper_I, tw));
        out.add("socle generation at " + weight_str(lam), pass);
    }
}

template <class K>
void suite_duality(AnalysisContext<K>& ctx, const Box& box, CheckList& out) {
    const RootDatum& d = *ctx.d;
    const LeviDatum& l = *ctx.levi;
    TauMap tau = build_tau(*ctx.cb, l);
    for (const Weight& lam : box.enumerate()) {
        GradedModule<K> DL = duality_D(ctx.L(lam), tau);
        bool pass = check_module_axioms(DL).empty();
        Weight wl = dot_action_weyl(d, l.w_I, lam);
        pass = pass && iso_test(DL, ctx.L(wl));
        GradedModule<K> DZ = duality_D(ctx.Z(lam), tau);
        pass = pass && iso_test(DZ, ctx.Zw(l.w_upper_I, lambda_twist(d, l, l.w_upper_I, wl)));
        out.add("duality at " + weight_str(lam), pass);
    }
}

template <class K>
void suite_blocks(AnalysisContext<K>& ctx, const PiProfile& prof, const Box& box, CheckList& out) {
    auto rep = verify_linkage(ctx, prof, box);
    out.add("composition factors contained in predicted classes", rep.ok);
}

void suite_rank1_ext(const RootDatum& d, const LeviDatum& levi, const ChevalleyBasis& cb,
                     const Box& box, CheckList& out) {
    RatFunc tinv = t_power(d.p, -1);
    for (const Weight& lam : box.enumerate()) {
        if (raise_step(d, lam) == 0) {
            out.add("projective on the wall at " + weight_str(lam),
                    projective_Q(d, levi, cb, lam).dim() == d.p);
            continue;
        }
        auto rep = ext_group_rank1(d, levi, cb, lam);
        bool pass = rep.violations.empty() && rep.order == d.p;
        pass = pass && split_test(build_Y(d, levi, cb, lam, RatFunc::constant(d.p, 1)));
        pass = pass && !split_test(build_Y(d, levi, cb, lam, tinv));
        out.add("extension group at " + weight_str(lam), pass);
    }
}

void suite_ajs(const RootDatum& d, const LeviDatum& levi, const ChevalleyBasis& cb, const Box& box,
               CheckList& out) {
    std::vector<Weight> pts = box.enumerate();
    for (const Weight& lam : pts) {
        bool pass = true;
        for (const Weight& mu : pts)
            if (!main_theorem_check(d, levi, cb, lam, mu)) pass = false;
        out.add("multiplicity theorem row " + weight_str(lam), pass);
    }
}

void suite_reciprocity(const RootDatum& d, const LeviDatum& levi, const ChevalleyBasis& cb,
                       const Box& box, CheckList& out) {
    StructuralMap<Fp> pz{{Fp(0, d.p)}};
    AnalysisContext<Fp> ctx = make_context<Fp>(d, levi, cb, pz, Fp(0, d.p));
    for (const Weight& lam : box.enumerate()) {
        auto Qk = base_change_residue(projective_Q(d, levi, cb, lam));
        auto f = composition_factors(ctx, Qk);
        std::map<SimpleLabel, int> expect;
        std::vector<Weight> layers{lam};
        if (raise_step(d, lam) != 0) layers.push_back(raise_weight(d, lam));
        bool pass = true;
        SimpleLabel top = ctx.label(lam);
        for (const Weight& mu : layers) {
            auto zf = composition_factors(ctx, ctx.Z(mu));
            for (const auto& [lab, m] : zf) expect[lab] += m;
            // each standard layer of the cover contains the top exactly once
            pass = pass && zf.count(top) && zf.at(top) == 1;
        }
        pass = pass && f == expect;
        out.add("reciprocity at " + weight_str(lam), pass);
    }
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

enum class PiKind { Zero, Generic, Explicit };

PiKind pi_kind(const std::string& s) {
    if (s == "zero") return PiKind::Zero;
    if (s == "generic") return PiKind::Generic;
    return PiKind::Explicit;
}

std::vector<std::int64_t> parse_pi_values(const std::string& s, int rank) {
    std::vector<std::int64_t> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(std::stoll(part));
    if (static_cast<int>(v.size()) != rank)
        throw std::invalid_argument("pi: one value per simple root required");
    return v;
}

StructuralMap<Fp> field_pi(const JobConfig& cfg, const RootDatum& d) {
    StructuralMap<Fp> pi;
    if (pi_kind(cfg.pi) == PiKind::Zero) {
        for (int i = 0; i < d.rank; ++i) pi.pi_simple.push_back(Fp(0, d.p));
    } else {
        for (auto v : parse_pi_values(cfg.pi, d.rank))
            pi.pi_simple.push_back(Fp(((v % d.p) + d.p) % d.p, d.p));
    }
    return pi;
}

// Block and iso predictions assume the walls carry no residue shift: on every
// root where pi takes a prime-field value, that value must be zero.
void require_unshifted_walls(const RootDatum& d, const StructuralMap<Fp>& pi) {
    for (size_t r = 0; r < d.roots.size(); ++r)
        if (!pi.pi_of_root(d, static_cast<int>(r)).is_zero())
            throw std::invalid_argument(
                "pi takes a nonzero prime-field value on a root; block and iso "
                "predictions are only claimed for zero or generic wall values");
}

StructuralMap<RatFunc> generic_pi(const RootDatum& d) {
    StructuralMap<RatFunc> pi;
    for (int i = 0; i < d.rank; ++i) pi.pi_simple.push_back(t_power(d.p, i + 1));
    return pi;
}

void emit(const JobConfig& cfg, const json& j, const std::string& csv) {
    std::string payload;
    if (cfg.format == "json") {
        payload = j.dump(2) + "\n";
    } else {
        if (csv.empty()) throw std::invalid_argument("format csv not available for this command");
        payload = csv;
    }
    if (cfg.out.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(cfg.out);
        if (!f) throw std::invalid_argument("cannot open output path " + cfg.out);
        f << payload;
    }
}

json config_json(const JobConfig& cfg) {
    json j;
    j["type"] = cfg.type;
    j["p"] = cfg.p;
    j["levi"] = cfg.levi;
    j["pi"] = cfg.pi;
    j["box"] = cfg.box;
    return j;
}

int run(const JobConfig& cfg, const std::string& verb) {
    if (!is_prime(cfg.p) || cfg.p < 3) throw std::invalid_argument("p must be an odd prime");
    RootDatum d = build_root_datum(cfg.type, cfg.p);
    for (int i : cfg.levi)
        if (i < 0 || i >= d.rank) throw std::invalid_argument("levi: index out of range");
    std::set<int> lset(cfg.levi.begin(), cfg.levi.end());
    LeviDatum levi = build_levi(d, std::vector<int>(lset.begin(), lset.end()));
    ChevalleyBasis cb = build_chevalley(d);
    Box box = parse_box(cfg.box, d);
    bool generic = pi_kind(cfg.pi) == PiKind::Generic;

    json out = config_json(cfg);
    std::string csv;
    bool pass = true;

    if (verb == "decompose") {
        if (generic) {
            auto ctx = make_context<RatFunc>(d, levi, cb, generic_pi(d), RatFunc::constant(d.p, 0));
            out["decomposition"] = decompose_report(ctx, box, &csv);
        } else {
            auto ctx = make_context<Fp>(d, levi, cb, field_pi(cfg, d), Fp(0, d.p));
            out["decomposition"] = decompose_report(ctx, box, &csv);
        }
    } else if (verb == "blocks") {
        if (generic) {
            auto pi = generic_pi(d);
            auto ctx = make_context<RatFunc>(d, levi, cb, pi, RatFunc::constant(d.p, 0));
            out["blocks"] = blocks_report(ctx, compute_r_pi(d, pi), box, &pass, &csv);
        } else {
            auto pi = field_pi(cfg, d);
            require_unshifted_walls(d, pi);
            auto ctx = make_context<Fp>(d, levi, cb, pi, Fp(0, d.p));
            out["blocks"] = blocks_report(ctx, compute_r_pi(d, pi), box, &pass, &csv);
        }
    } else if (verb == "dump-module") {
        json mods = json::array();
        if (generic) {
            auto ctx = make_context<RatFunc>(d, levi, cb, generic_pi(d), RatFunc::constant(d.p, 0));
            for (const Weight& lam : box.enumerate()) mods.push_back(module_json(ctx.Z(lam)));
        } else {
            auto ctx = make_context<Fp>(d, levi, cb, field_pi(cfg, d), Fp(0, d.p));
            for (const Weight& lam : box.enumerate()) mods.push_back(module_json(ctx.Z(lam)));
        }
        out["modules"] = mods;
    } else if (verb == "verify") {
        CheckList checks;
        bool rank1_suite = cfg.suite == "rank1-ext" || cfg.suite == "ajs-theorem" ||
                           cfg.suite == "reciprocity";
        if (rank1_suite && (d.rank != 1 || generic))
            throw std::invalid_argument("suite " + cfg.suite +
                                        " requires type A1 with a field-valued pi");
        if (cfg.suite == "classification") {
            if (generic) throw std::invalid_argument("suite classification requires field-valued pi");
            auto pi = field_pi(cfg, d);
            require_unshifted_walls(d, pi);
            auto ctx = make_context<Fp>(d, levi, cb, pi, Fp(0, d.p));
            suite_classification(ctx, compute_r_pi(d, pi), box, checks);
        } else if (cfg.suite == "walls" || cfg.suite == "socle" || cfg.suite == "duality" ||
                   cfg.suite == "blocks") {
            auto drive = [&](auto& ctx, const PiProfile& prof) {
                if (cfg.suite == "walls") suite_walls(ctx, box, checks);
                else if (cfg.suite == "socle") suite_socle(ctx, box, checks);
                else if (cfg.suite == "duality") suite_duality(ctx, box, checks);
                else suite_blocks(ctx, prof, box, checks);
            };
            if (generic) {
                auto pi = generic_pi(d);
                auto ctx = make_context<RatFunc>(d, levi, cb, pi, RatFunc::constant(d.p, 0));
                drive(ctx, compute_r_pi(d, pi));
            } else {
                auto pi = field_pi(cfg, d);
                if (cfg.suite == "blocks") require_unshifted_walls(d, pi);
                auto ctx = make_context<Fp>(d, levi, cb, pi, Fp(0, d.p));
                drive(ctx, compute_r_pi(d, pi));
            }
        } else if (cfg.suite == "rank1-ext") {
            suite_rank1_ext(d, levi, cb, box, checks);
        } else if (cfg.suite == "ajs-theorem") {
            suite_ajs(d, levi, cb, box, checks);
        } else if (cfg.suite == "reciprocity") {
            suite_reciprocity(d, levi, cb, box, checks);
        } else {
            throw std::invalid_argument("unknown suite: " + cfg.suite);
        }
        out["suite"] = cfg.suite;
        out["checks"] = checks.to_json();
        pass = checks.all();
        out["pass"] = pass;
        std::ostringstream cs;
        cs << "check;pass\n";
        for (const auto& [n, p] : checks.checks) cs << n << ";" << (p ? 1 : 0) << "\n";
        csv = cs.str();
    } else {
        throw std::invalid_argument("unknown command " + verb);
    }

    emit(cfg, out, csv);
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded representation toolbox"};
    app.require_subcommand(1);
    JobConfig cfg;
    std::string verb;
    for (const char* name : {"decompose", "blocks", "verify", "dump-module"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--type", cfg.type, "root datum type (A1, A2, B2)");
        sub->add_option("--p", cfg.p, "odd prime characteristic");
        sub->add_option("--levi", cfg.levi, "Levi subset as simple root indices");
        sub->add_option("--pi", cfg.pi, "structural map: zero, generic, or value list");
        sub->add_option("--box", cfg.box, "weight box lo:hi per coordinate, half-open");
        if (std::string(name) == "verify") sub->add_option("--suite", cfg.suite)->required();
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->callback([&verb, name] { verb = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run(cfg, verb);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
