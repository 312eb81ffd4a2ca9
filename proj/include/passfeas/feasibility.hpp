#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "passfeas/geometry.hpp"

namespace passfeas {

enum class Role { Defender, Midfielder, Forward, Goalkeeper };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct OrientationSample {
    long frame = 0;
    double orientation = 0.0;

    friend bool operator==(const OrientationSample&, const OrientationSample&) = default;
};

struct PlayerState {
    std::string id;
    Point2 position;
    std::optional<double> orientation;  // degrees, [0, 360)
    std::optional<Role> role;
    // Raw per-frame observations around the kick; empty when orientation was given directly.
    std::vector<OrientationSample> orientation_samples;

    friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

/// One pass event frozen at the instant the passer kicks the ball.
struct Scenario {
    std::string event_id;
    FieldSpec field;
    PlayerState passer;
    std::vector<PlayerState> receivers;  // visible teammates, goalkeeper excluded
    std::vector<PlayerState> defenders;
    std::optional<std::string> ground_truth_receiver;
    std::optional<bool> success;
    std::optional<long> kick_frame;

    const PlayerState& receiver(std::string_view id) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Checks the structural invariants (unique ids, non-empty receivers, finite
/// positions, ground truth among receivers). Throws passfeas::Error.
void validate(const Scenario& scenario);

/// Immutable model configuration. The orientation normalizer is evaluated once
/// at construction from the head-on configuration (receiver straight ahead of
/// the passer, facing back).
class ModelParams {
public:
    explicit ModelParams(double psi_deg = 30.0, double z = 1.0, int neighbors = 3);

    double psi() const { return psi_; }
    double z() const { return z_; }
    int neighbors() const { return neighbors_; }
    double fo_dist_scale() const { return 2.0 * z_; }
    double normalizer() const { return normalizer_; }

private:
    double psi_;
    double z_;
    int neighbors_;
    double normalizer_;
};

enum class ScoreMode { F, Fpd, Fo, Fd, Fp };

std::string_view to_string(ScoreMode mode);
std::optional<ScoreMode> parse_score_mode(std::string_view text);
bool needs_orientation(ScoreMode mode);

struct FeasibilityBreakdown {
    std::string receiver_id;
    std::optional<double> F_o;  // absent when orientations are missing and not required
    double F_dP = 1.0;
    double F_dR = 1.0;
    double F_d = 1.0;
    double F_p = 1.0;
    std::optional<double> F;
    double F_pd = 1.0;
    double distance_to_passer = 0.0;  // normalized
    std::vector<std::string> passer_neighbors;
    std::vector<std::string> receiver_neighbors;

    double score(ScoreMode mode) const;
};

/// Geometry behind one orientation score, in the passer-local projected frame
/// (passer at the origin, receivers at distance Z).
struct OrientationGeometry {
    ConvexPolygon passer_triangle;
    ConvexPolygon receiver_triangle;
    ConvexPolygon intersection;
    Point2 projected_receiver;
    double weighted_area = 0.0;
    double value = 0.0;
};

struct DefenseResult {
    double value = 1.0;
    std::vector<std::string> neighbors;
};

std::vector<Point2> project_to_circle(const PlayerState& passer,
                                      const std::vector<PlayerState>& receivers, double z = 1.0);

OrientationGeometry orientation_geometry(const PlayerState& passer, const PlayerState& receiver,
                                         const ModelParams& params);
double orientation_feasibility(const PlayerState& passer, const PlayerState& receiver,
                               const ModelParams& params);

double weight_for_alpha(double alpha_deg);
double defender_weight(double beta_pd_deg, double beta_pr_deg);

DefenseResult passer_defense_feasibility(const Scenario& scenario, std::string_view receiver_id,
                                         const ModelParams& params);
DefenseResult receiver_defense_feasibility(const Scenario& scenario,
                                           std::string_view receiver_id,
                                           const std::vector<std::string>& excluded,
                                           const ModelParams& params);

double proximity_feasibility(const PlayerState& passer, const PlayerState& receiver,
                             const FieldSpec& field);

struct ScenarioEvaluation {
    ScoreMode mode = ScoreMode::F;
    std::vector<FeasibilityBreakdown> breakdowns;  // receiver order
    std::vector<std::size_t> ranking;              // indices into breakdowns, best first
    std::vector<OrientationGeometry> geometry;     // per receiver when F_o was computed

    const FeasibilityBreakdown& predicted() const { return breakdowns.at(ranking.front()); }
    /// 1-based rank of a receiver id; throws if unknown.
    std::size_t rank_of(std::string_view receiver_id) const;
};

/// Descending by score, then greater F_o, then closer receiver, then id.
std::vector<std::size_t> rank_receivers(const std::vector<FeasibilityBreakdown>& breakdowns,
                                        const std::vector<double>& scores);

ScenarioEvaluation evaluate_scenario(const Scenario& scenario, const ModelParams& params,
                                     ScoreMode mode = ScoreMode::F);

}  // namespace passfeas
