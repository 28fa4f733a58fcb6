#include "combsense/sweep_io.hpp"

#include <algorithm>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "combsense/csv.hpp"
#include "combsense/errors.hpp"

namespace combsense {

using nlohmann::json;
using csv::format_number;

std::size_t line_of_offset(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

namespace {

json parse_json(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, e.byte));
    }
}

double required_number(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(std::string("sweep meta is missing '") + key + "'", 0);
    }
    if (!it->is_number()) {
        throw ParseError(std::string("sweep meta field '") + key + "' must be a number", 0);
    }
    return it->get<double>();
}

const char* status_name(PointStatus s)
{
    switch (s) {
    case PointStatus::ok:
        return "ok";
    case PointStatus::invalid_visibility:
        return "invalid_visibility";
    case PointStatus::unreliable_calibration:
        return "unreliable_calibration";
    }
    return "unknown";
}

} // namespace

SweepMeta parse_sweep_meta(std::string_view json_text)
{
    const json doc = parse_json(json_text);
    if (!doc.is_object()) {
        throw ParseError("sweep meta must be a JSON object", 1);
    }
    static const std::set<std::string> known{"lambda", "tau1", "tau2", "alpha_sq", "variance",
                                             "probe_gamma"};
    for (const auto& item : doc.items()) {
        if (!known.contains(item.key())) {
            throw ParseError("unknown sweep meta key '" + item.key() + "'", 0);
        }
    }
    SweepMeta meta;
    meta.lambda = required_number(doc, "lambda");
    meta.tau1 = required_number(doc, "tau1");
    meta.tau2 = required_number(doc, "tau2");
    meta.alpha_sq = required_number(doc, "alpha_sq");
    meta.variance = required_number(doc, "variance");
    if (const auto it = doc.find("probe_gamma"); it != doc.end() && !it->is_null()) {
        if (!it->is_number()) {
            throw ParseError("sweep meta field 'probe_gamma' must be a number or null", 0);
        }
        meta.probe_gamma = it->get<double>();
    }
    meta.validate();
    return meta;
}

std::string sweep_meta_json(const SweepMeta& meta)
{
    json doc = {
        {"lambda", meta.lambda},     {"tau1", meta.tau1},         {"tau2", meta.tau2},
        {"alpha_sq", meta.alpha_sq}, {"variance", meta.variance},
    };
    doc["probe_gamma"] = meta.probe_gamma ? json(*meta.probe_gamma) : json(nullptr);
    return doc.dump(2) + "\n";
}

DelaySweep parse_sweep(std::string_view csv_text, std::string_view meta_json)
{
    const auto table = csv::parse_numeric(csv_text, 2);
    DelaySweep sweep;
    sweep.meta = parse_sweep_meta(meta_json);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double d = table.rows[i][0];
        if (!(d >= 0.0) || (!sweep.delays.empty() && !(d > sweep.delays.back()))) {
            throw ParseError("delays must be non-negative and strictly increasing",
                             table.line_numbers[i]);
        }
        sweep.delays.push_back(d);
        sweep.visibility.push_back(table.rows[i][1]);
    }
    if (sweep.delays.empty()) {
        throw InsufficientDataError("sweep file has no data rows");
    }
    return sweep;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path)
{
    auto p = csv_path;
    p.replace_extension(".json");
    return p;
}

DelaySweep load_sweep(const std::filesystem::path& csv_path,
                      const std::filesystem::path& meta_path)
{
    return parse_sweep(csv::read_file(csv_path), csv::read_file(meta_path));
}

std::string sweep_csv(const DelaySweep& sweep)
{
    std::ostringstream out;
    out << "# two-tooth visibility sweep; delays in tau0\n";
    out << "delay_tau0,visibility\n";
    for (std::size_t i = 0; i < sweep.delays.size(); ++i) {
        out << format_number(sweep.delays[i]) << ',' << format_number(sweep.visibility[i]) << '\n';
    }
    return out.str();
}

std::string kernel_csv(const KernelEstimate& est)
{
    std::ostringstream out;
    out << "# reconstructed kernel; delays in tau0, k_hat in occupation^2\n";
    out << "# calibration_applied=" << (est.calibration_applied ? "true" : "false")
        << " debias_applied=" << (est.debias_applied ? "true" : "false")
        << " flagged_points=" << est.flagged_count() << '\n';
    out << "delay_tau0,k_hat,status\n";
    for (std::size_t i = 0; i < est.delays.size(); ++i) {
        const auto st = est.status.empty() ? PointStatus::ok : est.status[i];
        out << format_number(est.delays[i]) << ',' << format_number(est.k_hat[i]) << ','
            << status_name(st) << '\n';
    }
    return out.str();
}

std::string spectrum_csv(const SpectrumEstimate& spec)
{
    const double two_pi = 2.0 * std::numbers::pi;
    std::ostringstream out;
    out << "# reconstructed noise spectrum; f in cycles/tau0, omega in rad/tau0\n";
    out << "# ir_cutoff_rad_per_tau0=" << format_number(spec.ir_cutoff)
        << " uv_cutoff_rad_per_tau0=" << format_number(spec.uv_cutoff) << '\n';
    out << "# normalized=" << (spec.normalized ? "true" : "false")
        << " points_used=" << spec.points_used << " negative_values=" << spec.negative_count
        << '\n';
    out << "f_cycles_per_tau0,omega_rad_per_tau0,s_nn\n";
    for (std::size_t i = 0; i < spec.omegas.size(); ++i) {
        out << format_number(spec.omegas[i] / two_pi) << ',' << format_number(spec.omegas[i])
            << ',' << format_number(spec.s_nn[i]) << '\n';
    }
    return out.str();
}

} // namespace combsense
