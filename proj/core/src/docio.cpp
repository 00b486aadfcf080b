#include "gseq/docio.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gseq/errors.hpp"

namespace gseq {

namespace {

using nlohmann::json;

json parse_checked(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw validation_error("document is not valid JSON");
    if (!j.is_object()) throw validation_error("document root must be a JSON object");
    return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw validation_error("unknown field \"" + key + "\" in " + where);
        }
    }
}

void check_version(const json& j) {
    if (!j.contains("version")) throw validation_error("missing field \"version\"");
    if (!j["version"].is_number_integer() || j["version"].get<int>() != kDocumentVersion) {
        throw validation_error("unsupported document version");
    }
}

template <typename T>
T get_field(const json& j, const std::string& key) {
    if (!j.contains(key)) throw validation_error("missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw validation_error("field \"" + key + "\" has the wrong type");
    }
}

json read_json_object(const json& j, const std::string& key) {
    if (!j.at(key).is_object()) {
        throw validation_error("field \"" + key + "\" must be an object");
    }
    return j.at(key);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path.string());
    out << text;
    if (!out) throw validation_error("write failed for " + path.string());
}

} // namespace

DesignDocument parse_design_document(const std::string& json_text) {
    const json j = parse_checked(json_text);
    reject_unknown(j, {"version", "K", "stage_n", "boundaries", "sigma", "theta0",
                       "theta1", "solution"},
                   "design document");
    check_version(j);

    DesignDocument doc;
    doc.design.num_stages = get_field<std::size_t>(j, "K");
    doc.design.stage_n = get_field<std::vector<std::size_t>>(j, "stage_n");
    doc.design.boundaries = get_field<std::vector<double>>(j, "boundaries");
    doc.design.sigma = get_field<double>(j, "sigma");
    doc.hyp.theta0 = get_field<double>(j, "theta0");
    doc.hyp.theta1 = get_field<double>(j, "theta1");

    if (j.contains("solution")) {
        const json s = read_json_object(j, "solution");
        reject_unknown(s, {"achieved_spending", "residuals", "iterations"},
                       "design document solution");
        SolutionInfo info;
        info.achieved_spending = get_field<std::vector<double>>(s, "achieved_spending");
        info.residuals = get_field<std::vector<double>>(s, "residuals");
        info.iterations = get_field<std::vector<int>>(s, "iterations");
        doc.solution = std::move(info);
    }

    require_valid(doc.design);
    require_valid(doc.hyp);
    return doc;
}

DesignDocument read_design_document(const std::filesystem::path& path) {
    try {
        return parse_design_document(read_file(path));
    } catch (const validation_error& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
}

std::string design_document_to_string(const DesignDocument& doc) {
    json j;
    j["version"] = kDocumentVersion;
    j["K"] = doc.design.num_stages;
    j["stage_n"] = doc.design.stage_n;
    j["boundaries"] = doc.design.boundaries;
    j["sigma"] = doc.design.sigma;
    j["theta0"] = doc.hyp.theta0;
    j["theta1"] = doc.hyp.theta1;
    if (doc.solution) {
        j["solution"] = {{"achieved_spending", doc.solution->achieved_spending},
                         {"residuals", doc.solution->residuals},
                         {"iterations", doc.solution->iterations}};
    }
    return j.dump(2) + "\n";
}

void write_design_document(const std::filesystem::path& path, const DesignDocument& doc) {
    write_file(path, design_document_to_string(doc));
}

PlanDocument parse_plan_document(const std::string& json_text) {
    const json j = parse_checked(json_text);
    reject_unknown(j, {"version", "kind", "alpha_total", "K", "increments", "stage_n",
                       "sigma", "theta0", "theta1"},
                   "plan document");
    check_version(j);

    PlanDocument doc;
    const auto kind = get_field<std::string>(j, "kind");
    if (kind == "pocock") {
        doc.plan.kind = SpendingKind::pocock_constant;
    } else if (kind == "explicit") {
        doc.plan.kind = SpendingKind::explicit_increments;
    } else {
        throw validation_error("plan kind must be \"pocock\" or \"explicit\"");
    }
    doc.plan.alpha_total = get_field<double>(j, "alpha_total");
    doc.plan.num_stages = get_field<std::size_t>(j, "K");
    if (doc.plan.kind == SpendingKind::explicit_increments) {
        doc.plan.increments = get_field<std::vector<double>>(j, "increments");
    } else if (j.contains("increments")) {
        throw validation_error("pocock plans do not take increments");
    }
    require_valid(doc.plan);

    doc.template_design.num_stages = doc.plan.num_stages;
    doc.template_design.stage_n = get_field<std::vector<std::size_t>>(j, "stage_n");
    doc.template_design.boundaries.assign(doc.plan.num_stages, 0.0);
    doc.template_design.sigma = get_field<double>(j, "sigma");
    doc.hyp.theta0 = get_field<double>(j, "theta0");
    doc.hyp.theta1 = get_field<double>(j, "theta1");

    require_valid(doc.template_design);
    require_valid(doc.hyp);
    return doc;
}

PlanDocument read_plan_document(const std::filesystem::path& path) {
    try {
        return parse_plan_document(read_file(path));
    } catch (const validation_error& e) {
        throw validation_error(path.string() + ": " + e.what());
    }
}

std::string plan_document_to_string(const PlanDocument& doc) {
    json j;
    j["version"] = kDocumentVersion;
    j["kind"] = doc.plan.kind == SpendingKind::pocock_constant ? "pocock" : "explicit";
    j["alpha_total"] = doc.plan.alpha_total;
    j["K"] = doc.plan.num_stages;
    if (doc.plan.kind == SpendingKind::explicit_increments) {
        j["increments"] = doc.plan.increments;
    }
    j["stage_n"] = doc.template_design.stage_n;
    j["sigma"] = doc.template_design.sigma;
    j["theta0"] = doc.hyp.theta0;
    j["theta1"] = doc.hyp.theta1;
    return j.dump(2) + "\n";
}

void write_plan_document(const std::filesystem::path& path, const PlanDocument& doc) {
    write_file(path, plan_document_to_string(doc));
}

} // namespace gseq
