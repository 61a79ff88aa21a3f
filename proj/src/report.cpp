#include "defcyc/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace defcyc {

int Report::passed() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(),
                                          [](const CaseRecord& c) { return c.verdict == "pass"; }));
}

int Report::failed() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(),
                                          [](const CaseRecord& c) { return c.verdict == "fail"; }));
}

int Report::skipped() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(),
                                          [](const CaseRecord& c) { return c.verdict == "skip"; }));
}

std::string report_json(const Report& r, bool with_timing) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["version"] = r.version;
    j["cases"] = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["order"] = c.order;
        jc["verdict"] = c.verdict;
        if (!c.witness.empty()) jc["witness"] = c.witness;
        jc["millis"] = with_timing ? c.millis : 0;
        j["cases"].push_back(std::move(jc));
    }
    j["summary"] = {{"pass", r.passed()}, {"fail", r.failed()}, {"skip", r.skipped()}};
    return j.dump(2) + "\n";
}

std::string report_table(const Report& r) {
    std::ostringstream os;
    os << "suite: " << r.suite << " (toolkit " << r.version << ")\n";
    std::size_t name_w = 4;
    for (const auto& c : r.cases) name_w = std::max(name_w, c.name.size());
    for (const auto& c : r.cases) {
        os << "  " << c.name << std::string(name_w - c.name.size() + 2, ' ') << c.verdict;
        if (!c.witness.empty()) os << "  [" << c.witness << "]";
        os << "\n";
    }
    os << "summary: " << r.passed() << " pass, " << r.failed() << " fail, " << r.skipped()
       << " skip\n";
    return os.str();
}

} // namespace defcyc
