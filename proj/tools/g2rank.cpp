// g2rank command-line tool: enumeration, certification, family construction
// and the counting experiments, all emitting NDJSON/CSV.
//
// Exit codes: 0 success, 2 precondition/input error, 3 internal invariant
// violation, 64 usage error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "g2rank/certify.hpp"
#include "g2rank/experiments.hpp"
#include "g2rank/families.hpp"
#include "g2rank/ndjson.hpp"
#include "g2rank/regev.hpp"

namespace {

using namespace g2r;

struct OutStream {
    std::ofstream file;
    std::ostream* out = &std::cout;

    explicit OutStream(const std::string& path) {
        if (!path.empty() && path != "-") {
            file.open(path, std::ios::trunc);
            require(file.good(), "cannot open output path: " + path);
            out = &file;
        }
    }
    std::ostream& ref() { return *out; }
};

std::vector<int64_t> parse_i64_list(const std::string& csv) {
    std::vector<int64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    require(!out.empty(), "empty list: " + csv);
    return out;
}

std::vector<uint64_t> parse_primes(const std::string& csv) {
    std::vector<uint64_t> out;
    for (int64_t v : parse_i64_list(csv)) {
        require(v > 2, "primes must be odd and greater than 2");
        out.push_back((uint64_t)v);
    }
    return out;
}

std::array<Rational, 3> parse_roots(const std::string& csv) {
    std::vector<Rational> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(rational_parse(item));
    require(out.size() == 3, "expected three comma-separated roots");
    return {out[0], out[1], out[2]};
}

WeierstrassModel load_model(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot read curve file: " + path);
    Json j;
    in >> j;
    return model_from_json(j);
}

BoxSpec make_box(const std::string& kind, int64_t x, int64_t y, int h_mask) {
    auto k = box_kind_from_name(kind);
    require(k.has_value(), "unknown box kind: " + kind + " (expected c1,c2,s1,s2,s1sq,u11)");
    BoxSpec spec;
    spec.kind = *k;
    spec.x = x;
    if (*k == BoxKind::S2) spec.y = y;
    if (h_mask >= 0) spec.h_mask = h_mask;
    spec.check();
    return spec;
}

int run_enumerate(const std::string& box, int64_t x, int64_t y, int h_mask, int64_t limit,
                  const std::string& out_path, bool resume) {
    BoxSpec spec = make_box(box, x, y, h_mask);
    BoxEnumerator e(spec);
    int64_t emitted = 0;

    std::string ckpt_path = out_path.empty() || out_path == "-" ? "" : out_path + ".ckpt";
    bool appending = false;
    if (resume) {
        require(!ckpt_path.empty(), "resume requires --out pointing at a file");
        // the checkpoint validates the box; the data file itself is the
        // source of truth for the position, so a kill between checkpoint
        // writes can never duplicate or drop models
        std::ifstream ck(ckpt_path);
        if (ck.good()) {
            Json j;
            try {
                ck >> j;
            } catch (const std::exception&) {
                throw precondition_error("checkpoint: corrupt file (not json): " + ckpt_path);
            }
            (void)checkpoint_from_json(j, spec);
        }
        std::ifstream data(out_path);
        std::string line, last;
        while (std::getline(data, line)) {
            if (line.empty()) continue;
            last = line;
            ++emitted;
        }
        if (emitted > 0) {
            WeierstrassModel last_model;
            try {
                last_model = model_from_json(Json::parse(last));
            } catch (const std::exception&) {
                throw precondition_error("resume: last line of " + out_path +
                                         " is not a model record; refusing to continue");
            }
            BoxEnumerator::Key key(8, 0);
            key[0] = h_rank(last_model.h);
            for (int i = 0; i < 7; ++i) key[(size_t)(i + 1)] = last_model.a((size_t)(6 - i)).convert_to<int64_t>();
            e.seek_after(key);
            appending = true;
        }
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!ckpt_path.empty()) {
        file.open(out_path, appending ? std::ios::app : std::ios::trunc);
        require(file.good(), "cannot open output path: " + out_path);
        out = &file;
    }

    while (limit < 0 || emitted < limit) {
        auto m = e.next();
        if (!m) break;
        (*out) << model_to_json(*m).dump() << "\n";
        ++emitted;
        if (!ckpt_path.empty() && emitted % 1000 == 0 && e.last_key().size() == 8) {
            std::ofstream ck(ckpt_path, std::ios::trunc);
            ck << checkpoint_to_json(spec, e.last_key(), emitted).dump() << "\n";
        }
    }
    if (!ckpt_path.empty() && e.last_key().size() == 8) {
        std::ofstream ck(ckpt_path, std::ios::trunc);
        ck << checkpoint_to_json(spec, e.last_key(), emitted).dump() << "\n";
    }
    std::cerr << "enumerated " << emitted << " models\n";
    return 0;
}

int run_certify(const std::string& curve_path, bool pair, int64_t bound, const std::string& primes_csv,
                int kappa, const std::string& out_path) {
    WeierstrassModel m = load_model(curve_path);
    CertifyOptions opts;
    opts.kappa = kappa;
    std::vector<uint64_t> primes = primes_csv.empty()
                                       ? choose_good_primes(SimplifiedModel::of(m), opts.prime_count)
                                       : parse_primes(primes_csv);
    RankCertificate cert = pair ? certify_pair(m, Integer(bound), primes, opts)
                                : certify_alpha(m, primes, opts);
    OutStream out(out_path);
    out.ref() << certificate_to_json(cert).dump() << "\n";
    return 0;
}

int run_verify(const std::string& in_path) {
    std::ifstream in(in_path);
    require(in.good(), "cannot read certificate file: " + in_path);
    std::string line;
    int64_t checked = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const std::exception& e) {
            throw precondition_error("verify: invalid ndjson line: " + std::string(e.what()));
        }
        RankCertificate cert = certificate_from_json(j);
        require(verify_certificate(cert), "verify: certificate failed re-derivation");
        ++checked;
    }
    require(checked > 0, "verify: no certificates found");
    std::cerr << "verified " << checked << " certificate(s)\n";
    return 0;
}

int run_split_family(int64_t x, const std::string& verify_primes, const std::string& out_path) {
    auto fam = split_family(x);
    OutStream out(out_path);
    for (auto& mem : fam) {
        Json j = split_member_to_json(mem);
        if (!verify_primes.empty()) {
            std::vector<uint64_t> ps;
            for (uint64_t p : parse_primes(verify_primes))
                if ((int64_t)p != mem.d && (int64_t)p != mem.m && p != 3) ps.push_back(p);
            j["verified_split"] = verify_split(mem, ps);
            Json used = Json::array();
            for (uint64_t p : ps) used.push_back(std::to_string(p));
            j["verify_primes"] = used;
        }
        out.ref() << j.dump() << "\n";
    }
    std::cerr << "emitted " << fam.size() << " family members\n";
    return 0;
}

int run_glue(const std::string& rf, const std::string& rg, const std::string& out_path) {
    GlueSpec spec = glue(parse_roots(rf), parse_roots(rg));
    OutStream out(out_path);
    out.ref() << glue_to_json(spec).dump() << "\n";
    return 0;
}

int run_twist(const std::string& curve_path, int64_t d, const std::string& out_path) {
    WeierstrassModel m = load_model(curve_path);
    WeierstrassModel t = quadratic_twist(m, Integer(d));
    OutStream out(out_path);
    out.ref() << model_to_json(t).dump() << "\n";
    return 0;
}

int run_density(const std::string& mode, const std::string& boxes_csv, const std::string& grid_csv,
                const std::string& plan_name, int64_t samples, uint64_t seed, int h_mask,
                unsigned workers, const std::string& out_base) {
    std::vector<int64_t> grid = parse_i64_list(grid_csv);
    SamplingPlan plan;
    if (plan_name == "exhaustive") {
        plan.mode = SamplingPlan::Exhaustive;
    } else if (plan_name == "sampled") {
        plan.mode = SamplingPlan::Uniform;
        require(samples > 0, "sampled plan needs --samples");
        plan.sample_size = (size_t)samples;
        plan.seed = seed;
    } else {
        throw precondition_error("unknown plan: " + plan_name + " (expected exhaustive|sampled)");
    }

    DensityReport rep;
    if (mode == "counts") {
        std::vector<BoxKind> kinds;
        std::stringstream ss(boxes_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto k = box_kind_from_name(item);
            require(k.has_value(), "unknown box kind: " + item);
            kinds.push_back(*k);
        }
        require(!kinds.empty(), "no boxes given");
        std::optional<int> hm;
        if (h_mask >= 0) hm = h_mask;
        rep = box_count_experiment(kinds, grid, plan, hm, workers);
    } else if (mode == "torsion") {
        std::string tb = boxes_csv == "s1,s1sq" ? "s1sq" : boxes_csv;  // counts-mode default passthrough
        auto kind = box_kind_from_name(tb);
        require(kind.has_value() && (*kind == BoxKind::S1Square || *kind == BoxKind::U11),
                "torsion mode scans one box: s1sq or u11");
        rep = torsion_density_experiment(grid, plan, {}, workers, *kind);
    } else {
        throw precondition_error("unknown density mode: " + mode + " (expected counts|torsion)");
    }

    if (out_base.empty() || out_base == "-") {
        for (const auto& r : rep.rows) std::cout << density_row_to_json(r).dump() << "\n";
        std::cout << density_csv(rep);
    } else {
        std::ofstream nd(out_base + ".ndjson", std::ios::trunc);
        for (const auto& r : rep.rows) nd << density_row_to_json(r).dump() << "\n";
        std::ofstream csv(out_base + ".csv", std::ios::trunc);
        csv << density_csv(rep);
    }
    std::cerr << rep.note << "\n";
    return 0;
}

int run_xa(int64_t amax, int64_t height_bound, unsigned workers, const std::string& out_path) {
    XaReport rep = xa_family_experiment(amax, height_bound, workers);
    Json j;
    j["type"] = "xa_experiment";
    j["a_max"] = rep.a_max;
    j["height_bound"] = rep.height_bound;
    j["squarefree_count"] = rep.squarefree_count;
    j["with_three_points"] = rep.with_three_points;
    j["with_three_points_sqden"] = rep.with_three_points_sqden;
    j["with_three_affine_x"] = rep.with_three_affine_x;
    if (rep.a_max == 100000 && rep.height_bound == 500) {
        j["reference_count"] = rep.reference_count;
        j["relative_deviation"] =
            (double)(rep.with_three_points_sqden - rep.reference_count) / (double)rep.reference_count;
    }
    OutStream out(out_path);
    out.ref() << j.dump() << "\n";
    return 0;
}

int run_regev_cost(unsigned n_bits, const std::string& d_grid_csv, uint64_t q, const std::string& curve_path,
                   int window, uint64_t seed, const std::string& out_path) {
    WeierstrassModel m = curve_path.empty()
                             ? WeierstrassModel(ZPoly({Integer(28), Integer(72), Integer(120), Integer(120),
                                                       Integer(75), Integer(18), Integer(1)}),
                                                {0, 0, 0, 0})
                             : load_model(curve_path);
    SimplifiedModel s = SimplifiedModel::of(m);
    require(good_reduction(s, q), "bad prime");
    auto jac = jacobian_mod_p(s, q);
    require(jac.has_rational_infinity(), "regev-cost: reduction lacks rational points at infinity");
    std::vector<Divisor<Fp>> pool;
    for (uint64_t x = 0; x < q && pool.size() < 16; ++x) {
        Fp gx = eval(jac.g(), Fp(x, q));
        auto y = sqrt_scan(gx);
        if (!y || y->v == 0) continue;
        pool.push_back(jac.embed_point(Fp(x, q), *y));
    }
    require(!pool.empty(), "regev-cost: no affine generators found mod q");
    std::vector<size_t> d_grid;
    for (int64_t d : parse_i64_list(d_grid_csv)) {
        require(d >= 1, "d grid entries must be positive");
        d_grid.push_back((size_t)d);
    }
    std::optional<unsigned> w;
    if (window > 0) w = (unsigned)window;
    auto rows = cost_report(n_bits, d_grid, jac, pool, seed, w);
    OutStream out(out_path);
    out.ref() << cost_csv(rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"genus-2 rank constructions: enumeration, certification, families, experiments"};
    app.require_subcommand(1);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "stream valid models of a coefficient box as NDJSON");
    std::string box = "s1";
    int64_t x = 1, y = 1, limit = -1;
    int h_mask = -1;
    std::string out;
    bool resume = false;
    enumerate->add_option("--box", box, "box kind: c1,c2,s1,s2,s1sq,u11");
    enumerate->add_option("--x", x, "box size X");
    enumerate->add_option("--y", y, "box size Y (s2 only)");
    enumerate->add_option("--h-mask", h_mask, "restrict to one h slice (0..15)");
    enumerate->add_option("--limit", limit, "stop after this many models");
    enumerate->add_option("--out", out, "output path (default stdout)");
    enumerate->add_flag("--resume", resume, "resume from <out>.ckpt");

    // certify
    auto* certify = app.add_subcommand("certify", "certify the infinity class (or the two-section pair)");
    std::string curve, primes;
    bool pair = false;
    int64_t bound = 20;
    int kappa = 4;
    certify->add_option("--curve", curve, "curve json file {\"f\":[...],\"h\":[...]}")->required();
    certify->add_flag("--pair", pair, "certify (alpha, beta) on the a6 = a0 = 1 family");
    certify->add_option("--bound", bound, "relation bound B for --pair");
    certify->add_option("--primes", primes, "comma-separated odd primes (default: first good ones)");
    certify->add_option("--kappa", kappa, "torsion cap multiplier");
    certify->add_option("--out", out, "output path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "re-check a certificate NDJSON file");
    std::string in_path;
    verify->add_option("--in", in_path, "certificate ndjson")->required();

    // split-family
    auto* split = app.add_subcommand("split-family", "emit the split-Jacobian family up to height X");
    std::string verify_primes;
    split->add_option("--x", x, "height bound X (>= 343)");
    split->add_option("--verify-primes", verify_primes, "check #J = #E_d * #E_m at these primes");
    split->add_option("--out", out, "output path (default stdout)");

    // glue
    auto* glue_cmd = app.add_subcommand("glue", "glue two rational 2-torsion cubics into a sextic");
    std::string roots_f, roots_g;
    glue_cmd->add_option("--roots-f", roots_f, "three comma-separated rationals")->required();
    glue_cmd->add_option("--roots-g", roots_g, "three comma-separated rationals")->required();
    glue_cmd->add_option("--out", out, "output path (default stdout)");

    // twist
    auto* twist = app.add_subcommand("twist", "quadratic twist of an h = 0 model");
    int64_t twist_d = 1;
    twist->add_option("--curve", curve, "curve json file")->required();
    twist->add_option("--d", twist_d, "squarefree twist parameter")->required();
    twist->add_option("--out", out, "output path (default stdout)");

    // density
    auto* density = app.add_subcommand("density", "box-count / torsion-density experiments");
    std::string mode = "counts", boxes = "s1,s1sq", grid = "20,40,80,160", plan = "sampled";
    int64_t samples = 2000;
    uint64_t seed = 1;
    unsigned workers = 1;
    density->add_option("--mode", mode, "counts | torsion");
    density->add_option("--boxes", boxes, "comma-separated box kinds (counts mode)");
    density->add_option("--grid", grid, "comma-separated ascending X grid");
    density->add_option("--plan", plan, "exhaustive | sampled");
    density->add_option("--samples", samples, "sample size per X for the sampled plan");
    density->add_option("--seed", seed, "sampling seed");
    density->add_option("--h-mask", h_mask, "restrict to one h slice (0..15)");
    density->add_option("--workers", workers, "worker threads");
    density->add_option("--out", out, "output base path (writes .ndjson and .csv)");

    // xa-experiment
    auto* xa = app.add_subcommand("xa-experiment", "squarefree and small-point counts for y^2 = x^5 + a");
    int64_t amax = 100000, height_bound = 100;
    xa->add_option("--amax", amax, "upper bound for a");
    xa->add_option("--height-bound", height_bound, "rational point search height (0 = skip)");
    xa->add_option("--workers", workers, "worker threads");
    xa->add_option("--out", out, "output path (default stdout)");

    // regev-cost
    auto* regev = app.add_subcommand("regev-cost", "multi-scalar multiplication cost table");
    unsigned n_bits = 256;
    std::string d_grid = "1,2,4,8,16";
    uint64_t q = 101;
    int window = 0;
    regev->add_option("--n", n_bits, "scalar bit length n");
    regev->add_option("--d-grid", d_grid, "comma-separated generator counts");
    regev->add_option("--q", q, "reduction prime");
    regev->add_option("--curve", curve, "lift curve json (default: built-in rank-1 witness)");
    regev->add_option("--window", window, "bucket window override");
    regev->add_option("--seed", seed, "scalar seed");
    regev->add_option("--out", out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 64;
    }

    try {
        if (app.got_subcommand(enumerate)) return run_enumerate(box, x, y, h_mask, limit, out, resume);
        if (app.got_subcommand(certify)) return run_certify(curve, pair, bound, primes, kappa, out);
        if (app.got_subcommand(verify)) return run_verify(in_path);
        if (app.got_subcommand(split)) return run_split_family(x, verify_primes, out);
        if (app.got_subcommand(glue_cmd)) return run_glue(roots_f, roots_g, out);
        if (app.got_subcommand(twist)) return run_twist(curve, twist_d, out);
        if (app.got_subcommand(density))
            return run_density(mode, boxes, grid, plan, samples, seed, h_mask, workers, out);
        if (app.got_subcommand(xa)) return run_xa(amax, height_bound, workers, out);
        if (app.got_subcommand(regev)) return run_regev_cost(n_bits, d_grid, q, curve, window, seed, out);
    } catch (const g2r::undecided_error& e) {
        std::cerr << "undecided: " << e.what() << "\n  evidence: " << e.partial_evidence << "\n";
        return 2;
    } catch (const g2r::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const g2r::internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
