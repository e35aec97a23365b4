#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "isc/vehicle.hpp"

namespace isc {

enum class ScenarioKind { path_following, obstacle_avoidance, combined };
enum class Provenance { automation, driver };

[[nodiscard]] std::string_view to_string(ScenarioKind kind);
[[nodiscard]] ScenarioKind scenario_from_string(std::string_view name);

/**
 * @brief Shape of the reference curves.
 *
 * Base curve y(t) = amplitude sin(2 pi t / period). The driver path in the
 * obstacle scenarios adds offset * s((t - change_start) / change_duration)
 * with the quintic smoothstep s(x) = 10x^3 - 15x^4 + 6x^5 clamped to [0, 1].
 */
struct PathShape {
    double amplitude = 2.0;        //!< [m]
    double period = 10.0;          //!< [s]
    double offset = 3.0;           //!< lateral offset of the avoidance path [m]
    double change_duration = 2.0;  //!< [s]
    double change_start = 3.0;     //!< [s]

    void validate() const;

    bool operator==(const PathShape&) const = default;
};

/// Sampled (y, psi) reference; samples past the end repeat the final one.
class ReferencePath {
public:
    ReferencePath(std::vector<OutputSample> samples, Provenance provenance);

    [[nodiscard]] const OutputSample& at(std::size_t k) const;
    /// Copies samples first .. first+count-1 into @p out.
    void window(std::size_t first, std::size_t count, std::vector<OutputSample>& out) const;

    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] Provenance provenance() const { return provenance_; }
    [[nodiscard]] const std::vector<OutputSample>& samples() const { return samples_; }

private:
    std::vector<OutputSample> samples_;
    Provenance provenance_;
};

/// Lateral offset profile of the avoidance manoeuvre at time t.
[[nodiscard]] double avoidance_offset(const PathShape& shape, double t);

/**
 * @brief Sample a reference path.
 *
 * psi(k) = (y(k+1) - y(k)) / (u_long t_s). The driver path deviates only for
 * the obstacle and combined scenarios.
 */
[[nodiscard]] ReferencePath make_reference(ScenarioKind kind, Provenance who, const PathShape& shape,
                                           double u_long, double t_s, std::size_t samples);

}  // namespace isc
