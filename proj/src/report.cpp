#include "levydim/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace levydim {

namespace {

Json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Json verdict_to_json(const Verdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["tail_slope"] = finite_or_null(v.tail_slope);
    j["slope_se"] = finite_or_null(v.slope_se);
    j["ci_half_width"] = finite_or_null(v.ci_half_width);
    if (v.estimate) j["estimate"] = finite_or_null(*v.estimate);
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

Json dimension_result_to_json(const DimensionResult& r) {
    Json j;
    j["beta_star"] = r.beta_star;
    j["method"] = to_string(r.method);
    j["bracket"] = Json::array({r.bracket.first, r.bracket.second});
    j["empty_at_criterion"] = r.empty_at_criterion;
    j["inconclusive_band"] = r.inconclusive_band;
    if (r.cross_check_beta) j["cross_check_beta"] = *r.cross_check_beta;
    Json trail = Json::array();
    for (const auto& entry : r.trail) {
        Json t;
        t["beta"] = entry.beta;
        t["verdict"] = verdict_to_json(entry.verdict);
        trail.push_back(std::move(t));
    }
    j["trail"] = std::move(trail);
    return j;
}

Json box_estimate_to_json(const BoxCountEstimate& e) {
    Json j;
    j["slope"] = e.slope;
    j["r2"] = e.r2;
    j["levels_used"] = Json::array({e.levels_used.first, e.levels_used.second});
    j["flags"] = Json{{"too_few_boxes", e.flags.too_few_boxes}, {"poor_fit", e.flags.poor_fit}};
    return j;
}

Json Report::to_json() const {
    Json j;
    j["version"] = kArtifactVersion;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["timing_ms"] = timing_ms;
    j["hypothesis_flags"] = Json{
        {"q_potential_density_ae_positive", hypothesis_flags.q_potential_density_ae_positive},
        {"per_beta", hypothesis_flags.per_beta}};
    j["payload"] = payload;
    return j;
}

void append_report(const std::filesystem::path& dir, const Report& report) {
    std::filesystem::create_directories(dir);
    std::ofstream os(dir / "reports.jsonl", std::ios::app);
    if (!os) throw std::runtime_error("cannot append to " + (dir / "reports.jsonl").string());
    os << report.to_json().dump() << '\n';
}

void write_shells_csv(const std::filesystem::path& path, const ShellProfile& profile) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "m,shell_sum,shell_se\n";
    for (size_t i = 0; i < profile.shell_sums.size(); ++i)
        os << (profile.m_lo + static_cast<int>(i)) << ',' << csv_num(profile.shell_sums[i]) << ','
           << csv_num(profile.shell_se[i]) << '\n';
    os << "head," << csv_num(profile.head) << ',' << csv_num(profile.head_se) << '\n';
}

void write_trail_csv(const std::filesystem::path& path, const std::vector<TrailEntry>& trail) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "beta,tail_slope,ci_half_width,verdict\n";
    for (const auto& e : trail)
        os << csv_num(e.beta) << ',' << csv_num(e.verdict.tail_slope) << ','
           << csv_num(e.verdict.ci_half_width) << ',' << to_string(e.verdict.kind) << '\n';
}

void write_boxes_csv(const std::filesystem::path& path, const OccupancyGrid& grid) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << "level,count\n";
    for (size_t i = 0; i < grid.levels.size(); ++i)
        os << grid.levels[i] << ',' << grid.counts[i] << '\n';
}

} // namespace levydim
