#include "riskcal/io.hpp"

#include <fstream>
#include <sstream>

namespace riskcal::io {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + ": missing field \"" + key + "\"");
    return *it;
}

std::size_t as_index(const Json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw SchemaError(field + ": expected a non-negative integer");
    return v.get<std::size_t>();
}

double as_number(const Json& v, const std::string& field) {
    if (!v.is_number()) throw SchemaError(field + ": expected a number");
    return v.get<double>();
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(source + ": " + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

Rational parse_rational(const Json& v, const std::string& field) {
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
        const auto num = v[0].get<long long>();
        const auto den = v[1].get<long long>();
        if (den <= 0) throw SchemaError(field + ": denominator must be positive");
        return Rational(num, den);
    }
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw SchemaError(field + ": expected [numerator, denominator]");
}

Json rational_to_json(const Rational& q) {
    return Json::array({numerator(q).convert_to<long long>(), denominator(q).convert_to<long long>()});
}

SpaceFile parse_space(const Json& doc) {
    if (!doc.is_object()) throw SchemaError("space: expected an object");
    if (auto it = doc.find("product_grid"); it != doc.end()) {
        const auto rows = as_index(require(*it, "rows", "product_grid"), "product_grid.rows");
        const auto cols = as_index(require(*it, "cols", "product_grid"), "product_grid.cols");
        if (rows == 0 || cols == 0) throw SchemaError("product_grid: rows and cols must be positive");
        auto [space, filt] = product_space(rows, cols);
        return {std::move(space), std::move(filt)};
    }

    const Json& masses = require(doc, "masses", "space");
    if (!masses.is_array() || masses.empty()) throw SchemaError("masses: expected a nonempty array");
    std::vector<Rational> m;
    for (std::size_t i = 0; i < masses.size(); ++i)
        m.push_back(parse_rational(masses[i], "masses[" + std::to_string(i) + "]"));

    std::vector<std::string> labels;
    if (auto it = doc.find("labels"); it != doc.end()) {
        if (!it->is_array() || it->size() != m.size())
            throw SchemaError("labels: expected one string per outcome");
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) throw SchemaError("labels[" + std::to_string(i) + "]: expected a string");
            labels.push_back((*it)[i].get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < m.size(); ++i) labels.push_back("w" + std::to_string(i));
    }

    const Json& blocks = require(doc, "f1_blocks", "space");
    if (!blocks.is_array()) throw SchemaError("f1_blocks: expected an array of index arrays");
    std::vector<Partition::Block> f1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::string field = "f1_blocks[" + std::to_string(b) + "]";
        if (!blocks[b].is_array()) throw SchemaError(field + ": expected an array");
        Partition::Block blk;
        for (std::size_t j = 0; j < blocks[b].size(); ++j)
            blk.push_back(as_index(blocks[b][j], field + "[" + std::to_string(j) + "]"));
        f1.push_back(std::move(blk));
    }
    const std::size_t n = m.size();
    OutcomeSpace space(std::move(labels), std::move(m));
    return {std::move(space), Filtration::two_period(n, Partition(std::move(f1)))};
}

SpaceFile load_space(const std::string& path) {
    try {
        return parse_space(read_json_file(path));
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw SchemaError(path + ": " + msg);
    }
}

Json space_to_json(const OutcomeSpace& space, const Filtration& filtration) {
    Json doc;
    Json masses = Json::array();
    for (const auto& m : space.masses()) masses.push_back(rational_to_json(m));
    doc["masses"] = std::move(masses);
    Json blocks = Json::array();
    for (const auto& b : filtration.f1.blocks()) blocks.push_back(b);
    doc["f1_blocks"] = std::move(blocks);
    doc["labels"] = space.labels();
    return doc;
}

CoherentUtility parse_utility(const Json& doc) {
    const Json& u = require(doc, "utility", "utility file");
    const Json& kind_v = require(u, "kind", "utility");
    if (!kind_v.is_string()) throw SchemaError("utility.kind: expected a string");
    const auto kind = kind_v.get<std::string>();
    try {
        if (kind == "expectation") return DistortionFunction::expectation();
        if (kind == "es") return DistortionFunction::es(parse_rational(require(u, "alpha", "utility"), "utility.alpha"));
        if (kind == "power") return DistortionFunction::power(as_number(require(u, "alpha", "utility"), "utility.alpha"));
        if (kind == "piecewise") {
            const Json& knots = require(u, "knots", "utility");
            if (!knots.is_array()) throw SchemaError("utility.knots: expected an array");
            std::vector<std::pair<double, double>> k;
            for (std::size_t i = 0; i < knots.size(); ++i) {
                const std::string field = "utility.knots[" + std::to_string(i) + "]";
                if (!knots[i].is_array() || knots[i].size() != 2) throw SchemaError(field + ": expected [p, psi]");
                k.emplace_back(as_number(knots[i][0], field), as_number(knots[i][1], field));
            }
            return DistortionFunction::piecewise(std::move(k));
        }
        if (kind == "scenario") {
            const Json& ms = require(u, "measures", "utility");
            if (!ms.is_array()) throw SchemaError("utility.measures: expected an array");
            ScenarioSet s;
            for (std::size_t q = 0; q < ms.size(); ++q) {
                const std::string field = "utility.measures[" + std::to_string(q) + "]";
                if (!ms[q].is_array()) throw SchemaError(field + ": expected an array");
                std::vector<double> w;
                for (std::size_t i = 0; i < ms[q].size(); ++i) {
                    const auto& e = ms[q][i];
                    const std::string ef = field + "[" + std::to_string(i) + "]";
                    w.push_back(e.is_array() ? to_double(parse_rational(e, ef)) : as_number(e, ef));
                }
                s.measures.push_back(std::move(w));
            }
            if (s.measures.empty()) throw SchemaError("utility.measures: scenario set is empty");
            return s;
        }
        if (kind == "product") {
            ProductExample p;
            p.rows = as_index(require(u, "rows", "utility"), "utility.rows");
            p.cols = as_index(require(u, "cols", "utility"), "utility.cols");
            if (p.rows == 0 || p.cols == 0) throw SchemaError("utility: product rows/cols must be positive");
            return p;
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("utility: ") + e.what());
    }
    throw SchemaError("utility.kind: unknown kind \"" + kind + "\"");
}

CoherentUtility load_utility(const std::string& path) {
    try {
        return parse_utility(read_json_file(path));
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw SchemaError(path + ": " + msg);
    }
}

Json utility_to_json(const CoherentUtility& u) {
    Json body;
    if (const auto* d = u.distortion()) {
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Expectation>) {
                    body["kind"] = "expectation";
                } else if constexpr (std::is_same_v<K, ExpectedShortfall>) {
                    body["kind"] = "es";
                    body["alpha"] = rational_to_json(k.alpha);
                } else if constexpr (std::is_same_v<K, PowerDistortion>) {
                    body["kind"] = "power";
                    body["alpha"] = k.alpha;
                } else {
                    body["kind"] = "piecewise";
                    Json knots = Json::array();
                    for (const auto& [p, v] : k.knots) knots.push_back({p, v});
                    body["knots"] = std::move(knots);
                }
            },
            d->kind());
    } else if (const auto* s = u.scenarios()) {
        body["kind"] = "scenario";
        body["measures"] = s->measures;
    } else {
        const auto* p = u.product();
        body["kind"] = "product";
        body["rows"] = p->rows;
        body["cols"] = p->cols;
    }
    Json doc;
    doc["utility"] = std::move(body);
    return doc;
}

RandomVariable parse_vector(const std::string& text, const Partition& f1, std::size_t outcomes,
                            const std::string& field) {
    std::vector<double> v;
    const auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '[') {
        const Json arr = parse_json_text(text, field);
        if (!arr.is_array()) throw SchemaError(field + ": expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            v.push_back(as_number(arr[i], field + "[" + std::to_string(i) + "]"));
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stod(item, &used));
                if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw SchemaError(field + ": cannot parse \"" + item + "\" as a number");
            }
        }
    }
    if (v.size() == outcomes) return RandomVariable(std::move(v));
    if (v.size() == f1.block_count()) {
        std::vector<double> full(outcomes);
        for (std::size_t b = 0; b < f1.block_count(); ++b)
            for (std::size_t i : f1.block(b)) full[i] = v[b];
        return RandomVariable(std::move(full));
    }
    throw SchemaError(field + ": expected " + std::to_string(outcomes) + " outcome values or " +
                      std::to_string(f1.block_count()) + " block values, got " +
                      std::to_string(v.size()));
}

}  // namespace riskcal::io
