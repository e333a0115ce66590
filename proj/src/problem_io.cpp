#include <algorithm>
#include <cctype>
#include <json.hpp>
#include <sstream>

#include "gengap/cli.hpp"
#include "gengap/error.hpp"

namespace gengap::cli {

using json = nlohmann::ordered_json;
using groups::FactorSpec;

namespace {

const char* kGrammarHint = " (grammar: C6, C2xC2, C5xZ, Z, Nil(C2,rank=2))";

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

long parse_order(const std::string& tok) {
    if (tok.size() < 2 || tok[0] != 'C') return -1;
    for (size_t i = 1; i < tok.size(); ++i)
        if (!std::isdigit((unsigned char)tok[i])) return -1;
    long n = 0;
    try {
        n = std::stol(tok.substr(1));
    } catch (const std::exception&) {
        return -1;
    }
    return n >= 1 ? n : -1;
}

// tokens of a direct-product expression: C<n> contributes an order, Z a
// free direction
struct DirectParts {
    std::vector<long> orders;
    int free_rank = 0;
};

DirectParts parse_direct(const std::string& text, const std::string& whole) {
    DirectParts d;
    std::string tok;
    std::stringstream ss(text);
    while (std::getline(ss, tok, 'x')) {
        tok = trim(tok);
        if (tok == "Z") {
            ++d.free_rank;
            continue;
        }
        long n = parse_order(tok);
        if (n < 0)
            throw gg_error("unrecognized factor '" + whole + "'" + kGrammarHint);
        if (n > 1) d.orders.push_back(n);
    }
    return d;
}

groups::FiniteGroup group_of(const DirectParts& d) {
    if (d.orders.empty()) return groups::trivial_group();
    if (d.orders.size() == 1) return groups::cyclic(d.orders[0]);
    return groups::abelian(d.orders);
}

const json& field(const json& j, const std::string& name) {
    auto it = j.find(name);
    if (it == j.end()) throw gg_error("problem field '" + name + "' is missing");
    return *it;
}

std::string kind_name(const FactorSpec& f) {
    switch (f.kind) {
        case FactorSpec::Kind::Finite: return "finite";
        case FactorSpec::Kind::FiniteCyclicTimesZ: return "finite_cyclic_times_z";
        case FactorSpec::Kind::NilpotentProduct: return "nilpotent_product";
    }
    return "?";
}

FactorSpec factor_from_json(const json& j, int index) {
    const std::string at = "factors[" + std::to_string(index) + "]";
    if (j.is_string()) return parse_factor(j.get<std::string>());
    if (!j.is_object())
        throw gg_error("problem field '" + at + "': expected a string or an object");

    std::vector<long> orders;
    if (j.contains("cyclic")) {
        if (!j["cyclic"].is_number_integer() || j["cyclic"].get<long>() < 1)
            throw gg_error("problem field '" + at + ".cyclic': expected an integer >= 1");
        long n = j["cyclic"].get<long>();
        if (n > 1) orders.push_back(n);
    } else if (j.contains("abelian")) {
        if (!j["abelian"].is_array())
            throw gg_error("problem field '" + at + ".abelian': expected an array of orders");
        for (const auto& o : j["abelian"]) {
            if (!o.is_number_integer() || o.get<long>() < 1)
                throw gg_error("problem field '" + at + ".abelian': orders must be integers >= 1");
            if (o.get<long>() > 1) orders.push_back(o.get<long>());
        }
    } else {
        throw gg_error("problem field '" + at + "': needs 'cyclic' or 'abelian'");
    }

    int rank = 0;
    if (j.contains("free_rank")) {
        if (!j["free_rank"].is_number_integer() || j["free_rank"].get<int>() < 0)
            throw gg_error("problem field '" + at + ".free_rank': expected an integer >= 0");
        rank = j["free_rank"].get<int>();
    }

    DirectParts d{orders, rank};
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string())
            throw gg_error("problem field '" + at + ".label': expected a string");
        label = j["label"].get<std::string>();
    }

    FactorSpec f;
    if (rank == 1 && orders.size() == 1 && !j.contains("presentation")) {
        f = groups::cyclic_times_z_factor(orders[0]);
        if (!label.empty()) f.label = label;
    } else if (rank == 0) {
        if (label.empty()) {
            for (long n : orders) label += (label.empty() ? "C" : "xC") + std::to_string(n);
            if (label.empty()) label = "C1";
        }
        f = groups::finite_factor(group_of(d), label);
    } else {
        if (label.empty()) throw gg_error("problem field '" + at + ".label': required for G x Z^e factors");
        f = groups::nilpotent_product_factor(group_of(d), rank, label);
    }

    if (j.contains("presentation")) {
        if (f.kind != FactorSpec::Kind::Finite)
            throw gg_error("problem field '" + at + ".presentation': custom presentations "
                           "apply to finite factors only");
        attach_presentation(f, j["presentation"].dump());
    }
    return f;
}

} // namespace

FactorSpec parse_factor(const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) throw gg_error(std::string("empty factor") + kGrammarHint);

    if (text.rfind("Nil(", 0) == 0) {
        if (text.back() != ')')
            throw gg_error("unrecognized factor '" + text + "'" + kGrammarHint);
        std::string inner = text.substr(4, text.size() - 5);
        size_t comma = inner.rfind(',');
        if (comma == std::string::npos || inner.compare(comma + 1, 5, "rank=") != 0)
            throw gg_error("factor '" + text + "': expected Nil(<abelian>,rank=<e>)");
        std::string rank_text = trim(inner.substr(comma + 6));
        int rank = 0;
        try {
            size_t used = 0;
            rank = std::stoi(rank_text, &used);
            if (used != rank_text.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw gg_error("factor '" + text + "': rank must be an integer");
        }
        if (rank < 0) throw gg_error("factor '" + text + "': rank must be >= 0");
        DirectParts d = parse_direct(trim(inner.substr(0, comma)), text);
        if (d.free_rank > 0)
            throw gg_error("factor '" + text + "': the finite part of Nil(...) cannot contain Z");
        return groups::nilpotent_product_factor(group_of(d), rank, text);
    }

    DirectParts d = parse_direct(text, text);
    if (d.free_rank == 0) return groups::finite_factor(group_of(d), text);
    if (d.free_rank == 1 && d.orders.size() == 1)
        return groups::cyclic_times_z_factor(d.orders[0]);
    return groups::nilpotent_product_factor(group_of(d), d.free_rank, text);
}

std::vector<FactorSpec> parse_factors(const std::string& text) {
    std::vector<FactorSpec> out;
    std::string piece;
    int depth = 0;
    auto flush = [&] {
        piece = trim(piece);
        if (piece.empty()) throw gg_error(std::string("empty factor in list") + kGrammarHint);
        out.push_back(parse_factor(piece));
        piece.clear();
    };
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == ',' || ch == '*')) {
            flush();
            continue;
        }
        piece.push_back(ch);
    }
    flush();
    return out;
}

ProblemDoc problem_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw gg_error(std::string("problem JSON is malformed: ") + e.what());
    }
    if (!doc.is_object()) throw gg_error("problem JSON must be an object");

    const json& jf = field(doc, "factors");
    if (!jf.is_array() || jf.empty())
        throw gg_error("problem field 'factors': expected a non-empty array");
    std::vector<FactorSpec> factors;
    for (int i = 0; i < (int)jf.size(); ++i) factors.push_back(factor_from_json(jf[i], i));

    ProblemDoc out;
    out.problem.factors = std::move(factors);
    out.problem.kind = formulas::ModuleKind::Augmentation;
    if (doc.contains("module")) {
        const json& jm = doc["module"];
        if (jm.is_string()) {
            std::string m = jm.get<std::string>();
            if (m == "augmentation") {
                out.problem.kind = formulas::ModuleKind::Augmentation;
            } else if (m == "relation") {
                out.problem.kind = formulas::ModuleKind::Relation;
            } else if (m == "relation-free" || m == "free-relation") {
                throw gg_error("module '" + m + "' asks for generators of the relation subgroup "
                               "itself; that count is not certified here, only the abelianized "
                               "relation module is computed");
            } else {
                throw gg_error("problem field 'module': expected \"augmentation\", \"relation\" "
                               "or {\"kernel\": s}, got \"" + m + "\"");
            }
        } else if (jm.is_object() && jm.contains("kernel")) {
            if (!jm["kernel"].is_number_integer())
                throw gg_error("problem field 'module.kernel': expected an integer stage");
            out.problem.kind = formulas::ModuleKind::Augmentation;
            out.kernel_stage = jm["kernel"].get<int>();
        } else {
            throw gg_error("problem field 'module': expected \"augmentation\", \"relation\" "
                           "or {\"kernel\": s}");
        }
    }
    return out;
}

void attach_presentation(FactorSpec& f, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw gg_error(std::string("presentation JSON is malformed: ") + e.what());
    }
    if (!doc.is_object()) throw gg_error("presentation JSON must be an object");
    const json& ja = field(doc, "alphabet");
    if (!ja.is_array() || ja.empty())
        throw gg_error("presentation field 'alphabet': expected a non-empty array of names");
    groups::Presentation pres;
    for (const auto& a : ja) {
        if (!a.is_string())
            throw gg_error("presentation field 'alphabet': entries must be strings");
        pres.alphabet.push_back(a.get<std::string>());
    }
    const json& jr = field(doc, "relators");
    if (!jr.is_array())
        throw gg_error("presentation field 'relators': expected an array of words");
    for (const auto& r : jr) {
        if (!r.is_string())
            throw gg_error("presentation field 'relators': entries must be word strings");
        pres.relator_text.push_back(r.get<std::string>());
        pres.relators.push_back(groups::parse_word(r.get<std::string>(), pres.alphabet));
    }
    std::vector<int> images;
    if (doc.contains("images")) {
        if (!doc["images"].is_array())
            throw gg_error("presentation field 'images': expected an array of element indices");
        for (const auto& v : doc["images"]) {
            if (!v.is_number_integer())
                throw gg_error("presentation field 'images': entries must be integers");
            images.push_back(v.get<int>());
        }
    } else {
        images = groups::default_images(f.group, pres);
    }
    groups::validate_presentation(f.group, pres, images);
    f.presentation = std::move(pres);
    f.presentation_images = std::move(images);
}

std::string problem_json(const formulas::FreeProductProblem& pr, bool pretty) {
    json j;
    j["module"] = pr.kind == formulas::ModuleKind::Augmentation ? "augmentation" : "relation";
    j["factors"] = json::array();
    for (const auto& f : pr.factors) {
        json jf;
        jf["label"] = f.label;
        jf["kind"] = kind_name(f);
        if (f.kind == FactorSpec::Kind::FiniteCyclicTimesZ) {
            jf["cyclic_order"] = f.cyclic_order;
        } else {
            jf["invariants"] = groups::abelian_invariants(f.group);
            if (f.kind == FactorSpec::Kind::NilpotentProduct) jf["free_rank"] = f.free_rank;
        }
        if (f.presentation) jf["relators"] = f.presentation->relator_text;
        j["factors"].push_back(std::move(jf));
    }
    return pretty ? j.dump(2) : j.dump();
}

std::string canonical_problem_string(const formulas::FreeProductProblem& pr) {
    json j = json::parse(problem_json(pr, false));
    json tables = json::array();
    for (const auto& f : pr.factors) {
        json t;
        t["order"] = f.group.order;
        json flat = json::array();
        for (const auto& row : f.group.mul)
            for (int v : row) flat.push_back(v);
        t["mul"] = std::move(flat);
        t["gens"] = f.group.gens;
        if (f.presentation) {
            t["alphabet"] = f.presentation->alphabet;
            t["images"] = f.presentation_images;
        }
        tables.push_back(std::move(t));
    }
    j["tables"] = std::move(tables);
    return j.dump();
}

} // namespace gengap::cli
