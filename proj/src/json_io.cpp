#include "perideg/json_io.hpp"

#include <cstdint>
#include <sstream>

#include "perideg/expr.hpp"

namespace perideg {

Json ring_to_json(const RingElement& e) {
    Json j;
    j["so2"] = e.so2();
    Json zk = Json::object();
    for (const auto& [k, v] : e.zk_coords()) zk[std::to_string(k)] = v;
    j["zk"] = zk;
    j["undefined"] = e.undefined_coords();
    j["K"] = e.truncation_bound();
    return j;
}

RingElement ring_from_json(const Json& j) {
    RingElement e(j.at("K").get<int>());
    e.set_so2(j.at("so2").get<std::int64_t>());
    for (const auto& [key, value] : j.at("zk").items())
        e.set_zk(std::stoi(key), value.get<std::int64_t>());
    for (const auto& k : j.at("undefined")) e.mark_undefined(k.get<int>());
    return e;
}

namespace {

double entry_to_double(const Json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return eval_scalar_expr(v.get<std::string>());
    throw std::invalid_argument("matrix entry must be a number or an expression string");
}

Vec vector_from_json(const Json& j) {
    Vec x;
    for (const auto& v : j) x.push_back(entry_to_double(v));
    return x;
}

}  // namespace

SymMatrix matrix_from_json(const Json& j, int expected_dim) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected a non-empty array of rows");
    const int n = static_cast<int>(j.size());
    if (expected_dim >= 0 && n != expected_dim)
        throw std::invalid_argument("matrix: expected dimension " + std::to_string(expected_dim));
    std::vector<double> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw std::invalid_argument("matrix: rows must all have length " + std::to_string(n));
        for (const auto& v : row) entries.push_back(entry_to_double(v));
    }
    return SymMatrix(n, std::move(entries));
}

Json matrix_to_json(const SymMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j));
        rows.push_back(row);
    }
    return rows;
}

SystemSpec system_from_json(const Json& j) {
    if (j.contains("model")) {
        const Json& mj = j.at("model");
        ModelPotential m;
        m.n = mj.at("n").get<int>();
        m.a = entry_to_double(mj.at("a"));
        m.v_inf = matrix_from_json(mj.at("v_inf"), m.n);
        return build_system(m, entry_to_double(mj.at("T")));
    }

    SystemSpec spec;
    spec.n = j.at("n").get<int>();
    spec.period = entry_to_double(j.at("T"));
    spec.v_inf = matrix_from_json(j.at("v_inf"), spec.n);
    for (const auto& pj : j.at("critical_points")) {
        CriticalPoint cp;
        cp.id = pj.at("id").get<std::string>();
        cp.location = vector_from_json(pj.at("x"));
        cp.hessian = matrix_from_json(pj.at("hessian"), spec.n);
        if (pj.contains("brouwer_override"))
            cp.brouwer_override = pj.at("brouwer_override").get<long long>();
        spec.critical_points.push_back(std::move(cp));
    }
    if (j.contains("inf_brouwer_override"))
        spec.inf_brouwer_override = j.at("inf_brouwer_override").get<long long>();
    if (j.contains("a")) {
        // model coupling given: attach the closed-form callbacks
        ModelPotential m;
        m.n = spec.n;
        m.a = entry_to_double(j.at("a"));
        m.v_inf = spec.v_inf;
        spec.model_a = m.a;
        spec.potential = m.bundle();
        if (!spec.inf_brouwer_override)
            spec.inf_brouwer_override = index_at_infinity_sign(m.v_inf, m.n);
    }
    spec.validate();
    return spec;
}

Json system_to_json(const SystemSpec& spec) {
    Json j;
    j["n"] = spec.n;
    j["T"] = spec.period;
    j["v_inf"] = matrix_to_json(spec.v_inf);
    if (spec.model_a) j["a"] = *spec.model_a;
    Json points = Json::array();
    for (const auto& cp : spec.critical_points) {
        Json pj;
        pj["id"] = cp.id;
        pj["x"] = cp.location;
        pj["hessian"] = matrix_to_json(cp.hessian);
        if (cp.brouwer_override) pj["brouwer_override"] = *cp.brouwer_override;
        points.push_back(pj);
    }
    j["critical_points"] = points;
    if (spec.inf_brouwer_override) j["inf_brouwer_override"] = *spec.inf_brouwer_override;
    return j;
}

Json index_to_json(const EquivariantIndex& idx) {
    Json j;
    j["owner"] = idx.owner;
    j["brouwer"] = idx.brouwer;
    j["value"] = ring_to_json(idx.value);
    Json jk = Json::object();
    for (const auto& [k, v] : idx.jk) jk[std::to_string(k)] = v;
    j["jk"] = jk;
    j["resonant_modes"] = idx.resonant_modes;
    j["exclusion"] = idx.exclusion;
    j["singular_hessian"] = idx.singular_hessian;
    j["k_cutoff"] = idx.k_cutoff;
    return j;
}

EquivariantIndex index_from_json(const Json& j) {
    EquivariantIndex idx;
    idx.owner = j.at("owner").get<std::string>();
    idx.brouwer = j.at("brouwer").get<long long>();
    idx.value = ring_from_json(j.at("value"));
    for (const auto& [key, value] : j.at("jk").items())
        idx.jk[std::stoi(key)] = value.get<long long>();
    for (const auto& v : j.at("resonant_modes")) idx.resonant_modes.insert(v.get<int>());
    for (const auto& v : j.at("exclusion")) idx.exclusion.insert(v.get<int>());
    idx.singular_hessian = j.at("singular_hessian").get<bool>();
    idx.k_cutoff = j.at("k_cutoff").get<int>();
    return idx;
}

Json certificate_to_json(const ExistenceCertificate& cert) {
    Json j;
    j["verdict"] = to_string(cert.verdict);
    if (cert.witness_k) {
        j["witness_k"] = *cert.witness_k;
        j["lhs"] = cert.lhs;
        j["rhs"] = cert.rhs;
    }
    j["period"] = cert.period;
    j["k_max"] = cert.k_max;
    j["exclusion"] = cert.global_exclusion;
    Json table = Json::array();
    for (const auto& row : cert.table) {
        Json rj;
        rj["k"] = row.k;
        rj["infinity"] = row.lhs;
        rj["sum"] = row.rhs;
        table.push_back(rj);
    }
    j["comparison"] = table;
    j["so2"] = Json{{"infinity", cert.so2_infinity}, {"sum", cert.so2_sum}};
    j["at_infinity"] = index_to_json(cert.at_infinity);
    Json points = Json::array();
    for (const auto& idx : cert.points) points.push_back(index_to_json(idx));
    j["points"] = points;
    Json notes = Json::array();
    for (const auto& note : cert.minimal_period_notes) {
        Json nj;
        nj["owner"] = note.owner;
        nj["modes"] = note.modes;
        nj["periods"] = note.periods;
        notes.push_back(nj);
    }
    j["minimal_period_notes"] = notes;
    j["tolerances"] = Json{{"cluster_scale", cert.tols.cluster_scale},
                           {"resonance_scale", cert.tols.resonance_scale}};
    j["provenance"] = cert.provenance;
    if (!cert.input_hash.empty()) j["input_hash"] = cert.input_hash;
    return j;
}

ExistenceCertificate certificate_from_json(const Json& j) {
    ExistenceCertificate cert;
    cert.verdict = j.at("verdict").get<std::string>() == "proven" ? Verdict::Proven
                                                                  : Verdict::NotDecided;
    if (j.contains("witness_k")) {
        cert.witness_k = j.at("witness_k").get<int>();
        cert.lhs = j.at("lhs").get<long long>();
        cert.rhs = j.at("rhs").get<long long>();
    }
    cert.period = j.at("period").get<double>();
    cert.k_max = j.at("k_max").get<int>();
    for (const auto& v : j.at("exclusion")) cert.global_exclusion.insert(v.get<int>());
    for (const auto& rj : j.at("comparison")) {
        ComparisonRow row;
        row.k = rj.at("k").get<int>();
        row.lhs = rj.at("infinity").get<long long>();
        row.rhs = rj.at("sum").get<long long>();
        cert.table.push_back(row);
    }
    cert.so2_infinity = j.at("so2").at("infinity").get<long long>();
    cert.so2_sum = j.at("so2").at("sum").get<long long>();
    cert.at_infinity = index_from_json(j.at("at_infinity"));
    for (const auto& pj : j.at("points")) cert.points.push_back(index_from_json(pj));
    for (const auto& nj : j.at("minimal_period_notes")) {
        PeriodNote note;
        note.owner = nj.at("owner").get<std::string>();
        for (const auto& v : nj.at("modes")) note.modes.push_back(v.get<int>());
        for (const auto& v : nj.at("periods")) note.periods.push_back(v.get<double>());
        cert.minimal_period_notes.push_back(note);
    }
    cert.tols.cluster_scale = j.at("tolerances").at("cluster_scale").get<double>();
    cert.tols.resonance_scale = j.at("tolerances").at("resonance_scale").get<double>();
    for (const auto& [key, value] : j.at("provenance").items())
        cert.provenance[key] = value.get<std::string>();
    if (j.contains("input_hash")) cert.input_hash = j.at("input_hash").get<std::string>();
    return cert;
}

Json continuation_to_json(const ContinuationCertificate& cert) {
    Json j;
    j["witness_k"] = cert.witness_k;
    j["strong_form"] = cert.strong_form;
    j["symmetry_breaking_possible"] = cert.symmetry_breaking_possible;
    j["alternative"] = cert.alternative;
    j["base"] = certificate_to_json(cert.base);
    return j;
}

namespace {

Json loop_to_json(const FourierLoop& loop) {
    Json j;
    j["T"] = loop.period;
    j["n"] = loop.n;
    j["modes"] = loop.modes;
    j["a0"] = loop.a0;
    Json ac = Json::array(), as = Json::array();
    for (int k = 1; k <= loop.modes; ++k) {
        ac.push_back(loop.ac[k - 1]);
        as.push_back(loop.as[k - 1]);
    }
    j["cos"] = ac;
    j["sin"] = as;
    return j;
}

}  // namespace

Json orbit_to_json(const OrbitResult& orbit) {
    Json j;
    j["accepted"] = orbit.accepted;
    j["note"] = orbit.note;
    j["grad_norm"] = orbit.grad_norm;
    j["ode_residual"] = orbit.ode_residual;
    j["rk4_periodicity_defect"] = orbit.rk4_periodicity_defect;
    j["rk4_trajectory_gap"] = orbit.rk4_trajectory_gap;
    j["minimal_period"] = orbit.minimal_period;
    j["isotropy_k"] = orbit.isotropy_k;
    j["distance_to_stationary"] = orbit.distance_to_stationary;
    j["newton_iters"] = orbit.newton_iters;
    j["seed"] = Json{{"mode", orbit.seed_mode},
                     {"amplitude", orbit.seed_amplitude},
                     {"point", orbit.seed_point}};
    j["loop"] = loop_to_json(orbit.loop);
    return j;
}

Json branch_to_json(const BranchRecord& branch) {
    Json j;
    j["verdict"] = to_string(branch.verdict);
    j["direction"] = branch.direction;
    j["symmetry_breaking"] = branch.symmetry_breaking;
    if (!branch.note.empty()) j["note"] = branch.note;
    Json samples = Json::array();
    for (const auto& s : branch.samples) {
        Json sj;
        sj["lambda"] = s.lambda;
        sj["loop_norm"] = s.loop_norm;
        sj["isotropy_k"] = s.isotropy_k;
        sj["distance_to_stationary"] = s.distance_to_stationary;
        samples.push_back(sj);
    }
    j["samples"] = samples;
    return j;
}

std::string orbit_to_csv(const FourierLoop& loop, int samples) {
    std::ostringstream os;
    os << "t";
    for (int i = 0; i < loop.n; ++i) os << ",x" << (i + 1);
    os << "\n";
    os.precision(15);
    for (int s = 0; s <= samples; ++s) {
        const double t = loop.period * s / samples;
        const Vec x = loop.eval(t);
        os << t;
        for (int i = 0; i < loop.n; ++i) os << "," << x[i];
        os << "\n";
    }
    return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace perideg
