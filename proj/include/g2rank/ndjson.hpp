#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "g2rank/certify.hpp"
#include "g2rank/experiments.hpp"
#include "g2rank/families.hpp"
#include "g2rank/model.hpp"
#include "g2rank/regev.hpp"

namespace g2r {

using Json = nlohmann::ordered_json;

// All integers are serialized as decimal strings so downstream consumers
// never hit 64-bit overflow; field order is fixed.

inline std::string rational_str(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational rational_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

// ---- models: {"f":[a0..a6],"h":[h0..h3]} ---------------------------------------

inline Json model_to_json(const WeierstrassModel& m) {
    Json j;
    Json f = Json::array();
    for (int i = 0; i <= 6; ++i) f.push_back(m.a((size_t)i).str());
    Json h = Json::array();
    for (int i = 0; i < 4; ++i) h.push_back(std::to_string(m.h[(size_t)i]));
    j["f"] = f;
    j["h"] = h;
    return j;
}

inline WeierstrassModel model_from_json(const Json& j) {
    require(j.contains("f") && j["f"].is_array() && j["f"].size() <= 7, "model json: bad f");
    std::vector<Integer> a;
    for (const auto& v : j["f"]) a.push_back(Integer(v.get<std::string>()));
    std::array<int, 4> h{0, 0, 0, 0};
    if (j.contains("h")) {
        require(j["h"].is_array() && j["h"].size() <= 4, "model json: bad h");
        for (size_t i = 0; i < j["h"].size(); ++i) {
            const auto& v = j["h"][i];
            h[i] = v.is_string() ? std::stoi(v.get<std::string>()) : v.get<int>();
        }
    }
    return WeierstrassModel(ZPoly(a), h);
}

// ---- divisors: {"u":[...],"v":[...],"n":k} --------------------------------------

inline Json divisor_to_json(const QDivisor& d) {
    Json j;
    Json u = Json::array(), v = Json::array();
    for (const auto& c : d.u.c) u.push_back(rational_str(c));
    for (const auto& c : d.v.c) v.push_back(rational_str(c));
    j["u"] = u;
    j["v"] = v;
    j["n"] = d.n;
    return j;
}

inline QDivisor divisor_from_json(const Json& j) {
    require(j.contains("u") && j.contains("v") && j.contains("n"), "divisor json: missing field");
    QDivisor d;
    std::vector<Rational> u, v;
    for (const auto& c : j["u"]) u.push_back(rational_parse(c.get<std::string>()));
    for (const auto& c : j["v"]) v.push_back(rational_parse(c.get<std::string>()));
    d.u = QPoly(u);
    d.v = QPoly(v);
    d.n = j["n"].get<int>();
    return d;
}

// ---- certificates ----------------------------------------------------------------

inline Json certificate_to_json(const RankCertificate& cert) {
    Json j;
    j["type"] = "rank_certificate";
    j["curve"] = model_to_json(cert.curve);
    j["kind"] = certificate_kind_name(cert.kind);
    if (cert.kind == RankCertificate::TorsionOfOrder) j["order"] = cert.order.str();
    if (cert.kind == RankCertificate::IndependentUpTo || cert.kind == RankCertificate::RelationFound)
        j["bound"] = cert.bound.str();
    if (cert.kind == RankCertificate::RelationFound)
        j["relation"] = Json::array({cert.relation.first.str(), cert.relation.second.str()});
    j["kappa"] = cert.kappa;
    Json ev = Json::array();
    for (const auto& e : cert.evidence) {
        Json row;
        row["p"] = std::to_string(e.p);
        row["group_order"] = e.group_order.str();
        row["alpha_order"] = e.alpha_order.str();
        if (e.beta_order) row["beta_order"] = e.beta_order->str();
        ev.push_back(row);
    }
    j["evidence"] = ev;
    Json ex = Json::array();
    for (const auto& c : cert.exact) {
        Json row;
        row["claim"] = c.claim;
        row["m"] = c.m.str();
        row["n"] = c.n.str();
        row["is_zero"] = c.is_zero;
        ex.push_back(row);
    }
    j["exact"] = ex;
    return j;
}

inline RankCertificate certificate_from_json(const Json& j) {
    require(j.value("type", "") == std::string("rank_certificate"), "certificate json: wrong type");
    RankCertificate cert;
    cert.curve = model_from_json(j.at("curve"));
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "non_torsion") cert.kind = RankCertificate::NonTorsion;
    else if (kind == "torsion_of_order") cert.kind = RankCertificate::TorsionOfOrder;
    else if (kind == "independent_up_to") cert.kind = RankCertificate::IndependentUpTo;
    else if (kind == "relation_found") cert.kind = RankCertificate::RelationFound;
    else throw precondition_error("certificate json: unknown kind " + kind);
    if (j.contains("order")) cert.order = Integer(j["order"].get<std::string>());
    if (j.contains("bound")) cert.bound = Integer(j["bound"].get<std::string>());
    if (j.contains("relation"))
        cert.relation = {Integer(j["relation"][0].get<std::string>()), Integer(j["relation"][1].get<std::string>())};
    cert.kappa = j.value("kappa", 4);
    for (const auto& row : j.at("evidence")) {
        CertEvidence e;
        e.p = std::stoull(row.at("p").get<std::string>());
        e.group_order = Integer(row.at("group_order").get<std::string>());
        e.alpha_order = Integer(row.at("alpha_order").get<std::string>());
        if (row.contains("beta_order")) e.beta_order = Integer(row["beta_order"].get<std::string>());
        cert.evidence.push_back(e);
    }
    for (const auto& row : j.value("exact", Json::array())) {
        ExactClaim c;
        c.claim = row.at("claim").get<std::string>();
        c.m = Integer(row.at("m").get<std::string>());
        c.n = Integer(row.at("n").get<std::string>());
        c.is_zero = row.at("is_zero").get<bool>();
        cert.exact.push_back(c);
    }
    return cert;
}

// ---- family records ---------------------------------------------------------------

inline Json split_member_to_json(const SplitFamilyMember& mem) {
    Json j;
    j["type"] = "split_member";
    j["d"] = std::to_string(mem.d);
    j["m"] = std::to_string(mem.m);
    j["curve"] = model_to_json(mem.curve);
    j["predicted_rank"] = mem.predicted_rank;
    j["diagonal"] = mem.diagonal;
    return j;
}

inline Json glue_to_json(const GlueSpec& spec) {
    Json j;
    j["type"] = "glue";
    auto arr = [&](const std::array<Rational, 3>& r) {
        Json a = Json::array();
        for (const auto& x : r) a.push_back(rational_str(x));
        return a;
    };
    j["roots_f"] = arr(spec.roots_f);
    j["roots_g"] = arr(spec.roots_g);
    j["a1"] = rational_str(spec.a1);
    j["b1"] = rational_str(spec.b1);
    j["a2"] = rational_str(spec.a2);
    j["b2"] = rational_str(spec.b2);
    j["A"] = rational_str(spec.A);
    j["B"] = rational_str(spec.B);
    Json sx = Json::array();
    for (int i = 0; i <= 6; ++i) sx.push_back(rational_str(spec.sextic.coeff((size_t)i, Rational(0))));
    j["sextic"] = sx;
    j["j_invariants_equal"] = spec.j_invariants_equal;
    return j;
}

// ---- density report rows ------------------------------------------------------------

inline Json density_row_to_json(const DensityRow& r) {
    Json j;
    j["box"] = r.box;
    j["x"] = r.x;
    j["total"] = r.total;
    j["square_leading"] = r.square_leading;
    j["torsion"] = r.torsion;
    j["nontorsion"] = r.nontorsion;
    j["undecided"] = r.undecided;
    j["slope"] = r.slope;
    j["stderr"] = r.stderr_;
    j["sample_size"] = r.sample_size;
    j["seed"] = r.seed;
    return j;
}

inline std::string density_csv(const DensityReport& rep) {
    std::ostringstream out;
    out << "box,X,total,square_leading,torsion,nontorsion,undecided,slope,stderr\n";
    for (const auto& r : rep.rows) {
        out << r.box << "," << r.x << "," << r.total << "," << r.square_leading << "," << r.torsion << ","
            << r.nontorsion << "," << r.undecided << "," << r.slope << "," << r.stderr_ << "\n";
    }
    return out.str();
}

inline std::string cost_csv(const std::vector<CostRow>& rows) {
    std::ostringstream out;
    out << "n,d,additions,doublings,model_cost\n";
    for (const auto& r : rows)
        out << r.n_bits << "," << r.d << "," << r.additions << "," << r.doublings << "," << r.model_cost << "\n";
    return out.str();
}

// ---- enumeration checkpoints ---------------------------------------------------------

inline Json checkpoint_to_json(const BoxSpec& spec, const BoxEnumerator::Key& key, int64_t emitted) {
    Json j;
    j["type"] = "checkpoint";
    j["box"] = box_kind_name(spec.kind);
    j["x"] = spec.x;
    if (spec.y) j["y"] = *spec.y;
    if (spec.h_mask) j["h_mask"] = *spec.h_mask;
    Json k = Json::array();
    for (int64_t v : key) k.push_back(v);
    j["last_key"] = k;
    j["emitted"] = emitted;
    return j;
}

struct Checkpoint {
    BoxSpec spec;
    BoxEnumerator::Key key;
    int64_t emitted = 0;
};

inline Checkpoint checkpoint_from_json(const Json& j, const BoxSpec& expect) {
    require(j.value("type", "") == std::string("checkpoint"), "checkpoint: corrupt file (wrong type)");
    Checkpoint ck;
    ck.spec = expect;
    require(j.at("box").get<std::string>() == box_kind_name(expect.kind), "checkpoint: box kind mismatch");
    require(j.at("x").get<int64_t>() == expect.x, "checkpoint: X mismatch");
    if (expect.y) require(j.value("y", (int64_t)-1) == *expect.y, "checkpoint: Y mismatch");
    if (expect.h_mask) require(j.value("h_mask", -1) == *expect.h_mask, "checkpoint: h-mask mismatch");
    for (const auto& v : j.at("last_key")) ck.key.push_back(v.get<int64_t>());
    require(ck.key.size() == 8, "checkpoint: corrupt key");
    ck.emitted = j.at("emitted").get<int64_t>();
    return ck;
}

}  // namespace g2r
