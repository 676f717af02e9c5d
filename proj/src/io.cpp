#include "anisotl/io.hpp"

#include <fstream>
#include <sstream>

namespace anisotl {
namespace io {

expansive_matrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("mode") || !j.contains("entries"))
        throw std::invalid_argument("matrix json needs dim, mode, entries");
    int dim = j.at("dim").get<int>();
    std::string mode = j.at("mode").get<std::string>();
    const json& rows = j.at("entries");
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
        throw std::invalid_argument("matrix entries must be dim rows");
    if (mode == "rational") {
        std::vector<mpq_class> entries;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim)
                throw std::invalid_argument("matrix row length mismatch");
            for (const auto& e : row) {
                if (!e.is_string())
                    throw std::invalid_argument("rational entries must be strings");
                entries.push_back(parse_rational(e.get<std::string>()));
            }
        }
        return expansive_matrix::from_rational(dim, std::move(entries));
    }
    if (mode == "float") {
        std::vector<double> entries;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim)
                throw std::invalid_argument("matrix row length mismatch");
            for (const auto& e : row) {
                if (!e.is_number()) throw std::invalid_argument("float entries must be numbers");
                entries.push_back(e.get<double>());
            }
        }
        return expansive_matrix::from_float(dim, std::move(entries));
    }
    throw std::invalid_argument("mode must be \"rational\" or \"float\"");
}

json matrix_to_json(const expansive_matrix& m) {
    json rows = json::array();
    const int d = m.dim();
    for (int r = 0; r < d; ++r) {
        json row = json::array();
        for (int c = 0; c < d; ++c) {
            if (m.is_rational())
                row.push_back(format_rational(m.rational_view().at(r, c)));
            else
                row.push_back(m.float_view().at(r, c));
        }
        rows.push_back(std::move(row));
    }
    return json{{"dim", d}, {"mode", m.is_rational() ? "rational" : "float"},
                {"entries", std::move(rows)}};
}

space_params space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrix") || !j.contains("alpha") || !j.contains("p") ||
        !j.contains("q"))
        throw std::invalid_argument("space json needs matrix, alpha, p, q");
    space_params s{matrix_from_json(j.at("matrix")), j.at("alpha").get<double>(),
                   exponent::parse(j.at("p").get<std::string>()),
                   exponent::parse(j.at("q").get<std::string>())};
    return s;
}

json space_to_json(const space_params& s) {
    return json{{"matrix", matrix_to_json(s.matrix)},
                {"alpha", s.alpha},
                {"p", s.p.str()},
                {"q", s.q.str()}};
}

coefficient_sequence sequence_from_json(const json& j) {
    if (!j.is_object() || !j.contains("entries"))
        throw std::invalid_argument("sequence json needs entries");
    // complex values are reduced to moduli at ingestion
    struct centry {
        double re = 0, im = 0;
    };
    std::map<std::pair<long, kvec>, centry> merged;
    int dim = -1;
    for (const auto& e : j.at("entries")) {
        long scale = e.at("j").get<long>();
        kvec k;
        for (const auto& kv : e.at("k")) k.push_back(kv.get<long long>());
        if (dim < 0)
            dim = static_cast<int>(k.size());
        else if (dim != static_cast<int>(k.size()))
            throw std::invalid_argument("inconsistent index dimensions");
        double re = e.contains("re") ? e.at("re").get<double>() : 0.0;
        double im = e.contains("im") ? e.at("im").get<double>() : 0.0;
        auto& c = merged[{scale, k}];
        c.re += re;
        c.im += im;
    }
    if (dim < 0) throw std::invalid_argument("empty sequence file needs at least one entry");
    std::vector<seq_atom> atoms;
    for (const auto& [key, c] : merged) {
        double mod = std::hypot(c.re, c.im);
        if (mod > 0) atoms.push_back({key.first, key.second, mod});
    }
    return coefficient_sequence::from_atoms(dim, std::move(atoms));
}

json sequence_to_json(const coefficient_sequence& c) {
    json entries = json::array();
    for (const auto& a : c.atoms()) {
        json k = json::array();
        for (long long kv : a.k) k.push_back(kv);
        entries.push_back(json{{"j", a.j}, {"k", std::move(k)}, {"re", a.value}, {"im", 0.0}});
    }
    return json{{"entries", std::move(entries)}};
}

std::pair<expansive_matrix, expansive_matrix> pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("a") || !j.contains("b"))
        throw std::invalid_argument("pair json needs a and b matrices");
    return {matrix_from_json(j.at("a")), matrix_from_json(j.at("b"))};
}

geom::region parse_region_literal(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("region literal needs kind:");
    std::string kind = text.substr(0, colon);
    std::vector<double> nums;
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
    if (kind == "box") {
        if (nums.size() == 4)
            return geom::region::box({nums[0], nums[1]}, {nums[2], nums[3]});
        if (nums.size() == 2) return geom::region::box({nums[0]}, {nums[1]});
        throw std::invalid_argument("box literal needs 2 or 4 numbers");
    }
    if (kind == "ball") {
        if (nums.size() == 3) return geom::region::ball({nums[0], nums[1]}, nums[2]);
        if (nums.size() == 2) return geom::region::ball({nums[0]}, nums[1]);
        throw std::invalid_argument("ball literal needs 2 or 3 numbers");
    }
    throw std::invalid_argument("unknown region kind: " + kind);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

json norm_result_to_json(const norm_result& r) {
    json diag{{"candidates", r.diag.candidates},
              {"support_cubes", r.diag.support_cubes},
              {"pruning_bound", r.diag.pruning_bound},
              {"best_scale", r.diag.best_scale},
              {"overlay_pieces", r.diag.overlay_pieces}};
    if (!r.diag.note.empty()) diag["note"] = r.diag.note;
    return json{{"value", r.value},
                {"method", norm_method_name(r.method)},
                {"error_bound", r.error_bound},
                {"diagnostics", std::move(diag)}};
}

json orbit_verdict_to_json(const orbit_verdict& v) {
    json j{{"finite", v.finite}, {"m_max", v.m_max},
           {"mode", v.mode == scalar_mode::rational ? "exact" : "numerical"}};
    if (v.finite)
        j["period"] = v.period;
    else
        j["witness_count"] = v.witness_count;
    if (v.mode == scalar_mode::floating) j["tol"] = v.tol;
    return j;
}

json decomposition_to_json(const orbit_decomposition& d) {
    json reps = json::array();
    for (size_t t = 0; t < d.representatives.size(); ++t) {
        json entries = json::array();
        const dmatrix& m = d.representatives[t];
        for (int r = 0; r < m.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < m.dim(); ++c) {
                if (t < d.representatives_exact.size())
                    row.push_back(format_rational(d.representatives_exact[t].at(r, c)));
                else
                    row.push_back(m.at(r, c));
            }
            entries.push_back(std::move(row));
        }
        json cls = json::array();
        for (long residue : d.residue_classes[t]) cls.push_back(residue);
        reps.push_back(json{{"matrix", std::move(entries)}, {"residues_mod_m", std::move(cls)}});
    }
    return json{{"period", d.period}, {"class_count", d.size()}, {"classes", std::move(reps)}};
}

json classify_to_json(const classify_result& r) {
    json j{{"verdict", r.verdict == space_verdict::equal       ? "Equal"
                       : r.verdict == space_verdict::not_equal ? "NotEqual"
                                                               : "Unknown"},
           {"reason", r.reason},
           {"numerical", r.numerical}};
    if (r.orbit_tested) j["orbit"] = orbit_verdict_to_json(r.orbit);
    return j;
}

json law_report_to_json(const law_report& rep) {
    json pts = json::array();
    for (const auto& p : rep.points)
        pts.push_back(json{{"size", p.size},
                           {"measured", p.measured},
                           {"error", p.error},
                           {"predicted", p.predicted}});
    return json{{"points", std::move(pts)},     {"slope", rep.slope},
                {"intercept", rep.intercept},   {"max_residual", rep.max_residual},
                {"ratio_min", rep.ratio_min},   {"ratio_max", rep.ratio_max},
                {"inconclusive", rep.inconclusive}};
}

json certificate_to_json(const expansive_certificate& c) {
    json j{{"status", c.status == expansive_status::expansive       ? "expansive"
                      : c.status == expansive_status::not_expansive ? "not_expansive"
                                                                    : "indeterminate"},
           {"method", c.method}};
    if (!c.eigen_moduli.empty()) j["eigen_moduli"] = c.eigen_moduli;
    if (c.gelfand_n > 0) {
        j["gelfand_n"] = c.gelfand_n;
        j["gelfand_value"] = c.gelfand_value;
    }
    return j;
}

} // namespace io
} // namespace anisotl
