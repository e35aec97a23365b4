#include "isc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isc {

std::string_view to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::path_following: return "path_following";
    case ScenarioKind::obstacle_avoidance: return "obstacle_avoidance";
    case ScenarioKind::combined: return "combined";
    }
    return "unknown";
}

ScenarioKind scenario_from_string(std::string_view name)
{
    if (name == "path_following")
        return ScenarioKind::path_following;
    if (name == "obstacle_avoidance")
        return ScenarioKind::obstacle_avoidance;
    if (name == "combined")
        return ScenarioKind::combined;
    throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

void PathShape::validate() const
{
    if (!std::isfinite(amplitude))
        throw std::invalid_argument("PathShape: amplitude must be finite");
    if (!std::isfinite(period) || period <= 0.0)
        throw std::invalid_argument("PathShape: period must be positive");
    if (!std::isfinite(offset))
        throw std::invalid_argument("PathShape: offset must be finite");
    if (!std::isfinite(change_duration) || change_duration <= 0.0)
        throw std::invalid_argument("PathShape: change_duration must be positive");
    if (!std::isfinite(change_start) || change_start < 0.0)
        throw std::invalid_argument("PathShape: change_start must be non-negative");
}

ReferencePath::ReferencePath(std::vector<OutputSample> samples, Provenance provenance)
    : samples_(std::move(samples)), provenance_(provenance)
{
    if (samples_.empty())
        throw std::invalid_argument("ReferencePath: empty path");
}

const OutputSample& ReferencePath::at(std::size_t k) const
{
    return samples_[std::min(k, samples_.size() - 1)];
}

void ReferencePath::window(std::size_t first, std::size_t count, std::vector<OutputSample>& out) const
{
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = at(first + i);
}

double avoidance_offset(const PathShape& shape, double t)
{
    const double s = std::clamp((t - shape.change_start) / shape.change_duration, 0.0, 1.0);
    return shape.offset * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

ReferencePath make_reference(ScenarioKind kind, Provenance who, const PathShape& shape, double u_long, double t_s,
                             std::size_t samples)
{
    shape.validate();
    if (samples == 0)
        throw std::invalid_argument("make_reference: zero-length path");
    if (!(u_long > 0.0) || !(t_s > 0.0))
        throw std::invalid_argument("make_reference: velocity and sampling period must be positive");

    const bool deviates = who == Provenance::driver && kind != ScenarioKind::path_following;
    const auto lateral = [&](std::size_t k) {
        const double t = static_cast<double>(k) * t_s;
        double y = shape.amplitude * std::sin(2.0 * std::numbers::pi * t / shape.period);
        if (deviates)
            y += avoidance_offset(shape, t);
        return y;
    };

    std::vector<OutputSample> out(samples);
    double y_next = lateral(0);
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = y_next;
        y_next = lateral(k + 1);
        out[k] = {y, (y_next - y) / (u_long * t_s)};
    }
    return ReferencePath(std::move(out), who);
}

}  // namespace isc
