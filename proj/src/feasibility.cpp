#include "passfeas/feasibility.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "passfeas/error.hpp"

namespace passfeas {

namespace {

constexpr std::size_t kMaxReceivers = 10;
constexpr std::size_t kMaxDefenders = 11;

struct LocalOrientation {
    ConvexPolygon passer_triangle;
    ConvexPolygon receiver_triangle;
    ConvexPolygon intersection;
    Point2 projected_receiver;
    double weighted_area = 0.0;
};

// Passer at the origin, receiver moved to distance z along `bearing`.
LocalOrientation local_orientation(double bearing, double passer_orientation,
                                   double receiver_orientation, double psi, double z) {
    LocalOrientation out;
    out.projected_receiver = z * direction(bearing);
    out.passer_triangle = build_view_triangle({0.0, 0.0}, passer_orientation, psi, 2.0 * z).polygon();
    out.receiver_triangle =
        build_view_triangle(out.projected_receiver, receiver_orientation, psi, z).polygon();
    out.intersection = intersect_convex(out.passer_triangle, out.receiver_triangle);
    out.weighted_area =
        integrate_pair_weights(out.intersection, {0.0, 0.0}, out.projected_receiver, 2.0 * z);
    return out;
}

double require_orientation(const PlayerState& player) {
    if (!player.orientation) throw Error("missing orientation for player '" + player.id + "'");
    return *player.orientation;
}

struct Candidate {
    const PlayerState* defender;
    double weight;
    double dist;
    double weighted;
};

// Weighted nearest-defender pressure seen from `origin` for a pass along `pass_bearing`.
DefenseResult defense_pressure(Point2 origin, double pass_bearing,
                               const std::vector<const PlayerState*>& defenders,
                               const FieldSpec& field, int neighbors) {
    DefenseResult result;
    if (defenders.empty()) return result;
    std::vector<Candidate> candidates;
    candidates.reserve(defenders.size());
    for (const PlayerState* d : defenders) {
        // A defender standing on the origin is treated as sitting on the passing line.
        const double alpha = d->position == origin
                                 ? 0.0
                                 : angular_diff(angle_of(origin, d->position), pass_bearing);
        const double w = weight_for_alpha(alpha);
        const double dist = field.normalized_distance(origin, d->position);
        candidates.push_back({d, w, dist, w * dist});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.weighted, a.dist, a.defender->id) <
               std::tie(b.weighted, b.dist, b.defender->id);
    });
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(neighbors), candidates.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum += candidates[i].weight * std::max(0.0, 1.0 - candidates[i].dist);
        result.neighbors.push_back(candidates[i].defender->id);
    }
    result.value = std::exp(-sum / static_cast<double>(m));
    return result;
}

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

std::string_view to_string(Role role) {
    switch (role) {
        case Role::Defender: return "defender";
        case Role::Midfielder: return "midfielder";
        case Role::Forward: return "forward";
        case Role::Goalkeeper: return "goalkeeper";
    }
    return "?";
}

std::optional<Role> parse_role(std::string_view text) {
    if (text == "defender") return Role::Defender;
    if (text == "midfielder") return Role::Midfielder;
    if (text == "forward") return Role::Forward;
    if (text == "goalkeeper") return Role::Goalkeeper;
    return std::nullopt;
}

std::string_view to_string(ScoreMode mode) {
    switch (mode) {
        case ScoreMode::F: return "F";
        case ScoreMode::Fpd: return "Fpd";
        case ScoreMode::Fo: return "Fo";
        case ScoreMode::Fd: return "Fd";
        case ScoreMode::Fp: return "Fp";
    }
    return "?";
}

std::optional<ScoreMode> parse_score_mode(std::string_view text) {
    for (ScoreMode m : {ScoreMode::F, ScoreMode::Fpd, ScoreMode::Fo, ScoreMode::Fd, ScoreMode::Fp}) {
        if (text == to_string(m)) return m;
    }
    if (text == "F_pd") return ScoreMode::Fpd;
    if (text == "F_o") return ScoreMode::Fo;
    if (text == "F_d") return ScoreMode::Fd;
    if (text == "F_p") return ScoreMode::Fp;
    return std::nullopt;
}

bool needs_orientation(ScoreMode mode) { return mode == ScoreMode::F || mode == ScoreMode::Fo; }

const PlayerState& Scenario::receiver(std::string_view id) const {
    for (const auto& r : receivers) {
        if (r.id == id) return r;
    }
    throw Error("unknown receiver '" + std::string(id) + "'");
}

void validate(const Scenario& s) {
    if (!(s.field.length > 0.0) || !(s.field.width > 0.0) || !std::isfinite(s.field.length) ||
        !std::isfinite(s.field.width)) {
        throw Error("field dimensions must be positive and finite");
    }
    if (s.receivers.empty()) throw Error("scenario has no receivers");
    if (s.receivers.size() > kMaxReceivers) throw Error("scenario has more than 10 receivers");
    if (s.defenders.size() > kMaxDefenders) throw Error("scenario has more than 11 defenders");
    std::set<std::string> ids;
    auto check = [&](const PlayerState& p, std::string_view group) {
        if (p.id.empty()) throw Error(std::string(group) + " has an empty id");
        if (!ids.insert(p.id).second) throw Error("duplicate player id '" + p.id + "'");
        if (!finite(p.position)) throw Error("non-finite position for player '" + p.id + "'");
        if (p.orientation && !(*p.orientation >= 0.0 && *p.orientation < 360.0)) {
            throw Error("orientation of player '" + p.id + "' outside [0, 360)");
        }
    };
    check(s.passer, "passer");
    for (const auto& r : s.receivers) check(r, "receiver");
    for (const auto& d : s.defenders) check(d, "defender");
    if (s.ground_truth_receiver) {
        const bool found = std::any_of(s.receivers.begin(), s.receivers.end(),
                                       [&](const PlayerState& r) { return r.id == *s.ground_truth_receiver; });
        if (!found) throw Error("ground truth receiver '" + *s.ground_truth_receiver + "' is not a receiver");
    }
}

ModelParams::ModelParams(double psi_deg, double z, int neighbors)
    : psi_(psi_deg), z_(z), neighbors_(neighbors), normalizer_(0.0) {
    if (!(psi_ > 0.0 && psi_ < 90.0)) throw Error("psi must lie in (0, 90) degrees");
    if (!(z_ > 0.0) || !std::isfinite(z_)) throw Error("Z must be positive");
    if (neighbors_ < 1) throw Error("J must be at least 1");
    normalizer_ = local_orientation(0.0, 0.0, 180.0, psi_, z_).weighted_area;
    if (!(normalizer_ > 0.0)) throw Error("orientation normalizer is not positive");
}

double FeasibilityBreakdown::score(ScoreMode mode) const {
    switch (mode) {
        case ScoreMode::F:
            if (!F) throw Error("missing orientation score for receiver '" + receiver_id + "'");
            return *F;
        case ScoreMode::Fo:
            if (!F_o) throw Error("missing orientation score for receiver '" + receiver_id + "'");
            return *F_o;
        case ScoreMode::Fpd: return F_pd;
        case ScoreMode::Fd: return F_d;
        case ScoreMode::Fp: return F_p;
    }
    return 0.0;
}

std::vector<Point2> project_to_circle(const PlayerState& passer,
                                      const std::vector<PlayerState>& receivers, double z) {
    std::vector<Point2> out;
    out.reserve(receivers.size());
    for (const auto& r : receivers) {
        if (r.position == passer.position) {
            throw Error("coincident players '" + passer.id + "' and '" + r.id + "'");
        }
        out.push_back(passer.position + z * direction(angle_of(passer.position, r.position)));
    }
    return out;
}

OrientationGeometry orientation_geometry(const PlayerState& passer, const PlayerState& receiver,
                                         const ModelParams& params) {
    const double phi_p = require_orientation(passer);
    const double phi_r = require_orientation(receiver);
    if (receiver.position == passer.position) {
        throw Error("coincident players '" + passer.id + "' and '" + receiver.id + "'");
    }
    const double bearing = angle_of(passer.position, receiver.position);
    LocalOrientation local = local_orientation(bearing, phi_p, phi_r, params.psi(), params.z());
    OrientationGeometry g;
    g.passer_triangle = std::move(local.passer_triangle);
    g.receiver_triangle = std::move(local.receiver_triangle);
    g.intersection = std::move(local.intersection);
    g.projected_receiver = local.projected_receiver;
    g.weighted_area = local.weighted_area;
    g.value = std::min(1.0, local.weighted_area / params.normalizer());
    return g;
}

double orientation_feasibility(const PlayerState& passer, const PlayerState& receiver,
                               const ModelParams& params) {
    return orientation_geometry(passer, receiver, params).value;
}

double weight_for_alpha(double alpha_deg) {
    if (alpha_deg < 22.5) return 0.25;
    if (alpha_deg < 45.0) return 0.5;
    return 2.0;
}

double defender_weight(double beta_pd_deg, double beta_pr_deg) {
    return weight_for_alpha(angular_diff(beta_pd_deg, beta_pr_deg));
}

DefenseResult passer_defense_feasibility(const Scenario& scenario, std::string_view receiver_id,
                                         const ModelParams& params) {
    const PlayerState& receiver = scenario.receiver(receiver_id);
    if (receiver.position == scenario.passer.position) {
        throw Error("coincident players '" + scenario.passer.id + "' and '" + receiver.id + "'");
    }
    const double bearing = angle_of(scenario.passer.position, receiver.position);
    std::vector<const PlayerState*> defenders;
    for (const auto& d : scenario.defenders) defenders.push_back(&d);
    return defense_pressure(scenario.passer.position, bearing, defenders, scenario.field,
                            params.neighbors());
}

DefenseResult receiver_defense_feasibility(const Scenario& scenario,
                                           std::string_view receiver_id,
                                           const std::vector<std::string>& excluded,
                                           const ModelParams& params) {
    const PlayerState& receiver = scenario.receiver(receiver_id);
    if (receiver.position == scenario.passer.position) {
        throw Error("coincident players '" + scenario.passer.id + "' and '" + receiver.id + "'");
    }
    const double bearing = angle_of(scenario.passer.position, receiver.position);
    std::vector<const PlayerState*> candidates;
    for (const auto& d : scenario.defenders) {
        if (std::find(excluded.begin(), excluded.end(), d.id) == excluded.end()) candidates.push_back(&d);
    }
    return defense_pressure(receiver.position, bearing, candidates, scenario.field,
                            params.neighbors());
}

double proximity_feasibility(const PlayerState& passer, const PlayerState& receiver,
                             const FieldSpec& field) {
    return std::exp(-field.normalized_distance(passer.position, receiver.position));
}

std::size_t ScenarioEvaluation::rank_of(std::string_view receiver_id) const {
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
        if (breakdowns[ranking[pos]].receiver_id == receiver_id) return pos + 1;
    }
    throw Error("unknown receiver '" + std::string(receiver_id) + "'");
}

std::vector<std::size_t> rank_receivers(const std::vector<FeasibilityBreakdown>& breakdowns,
                                        const std::vector<double>& scores) {
    std::vector<std::size_t> order(breakdowns.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        const auto& ba = breakdowns[a];
        const auto& bb = breakdowns[b];
        if (ba.F_o && bb.F_o && *ba.F_o != *bb.F_o) return *ba.F_o > *bb.F_o;
        if (ba.distance_to_passer != bb.distance_to_passer) {
            return ba.distance_to_passer < bb.distance_to_passer;
        }
        return ba.receiver_id < bb.receiver_id;
    });
    return order;
}

ScenarioEvaluation evaluate_scenario(const Scenario& scenario, const ModelParams& params,
                                     ScoreMode mode) {
    validate(scenario);
    const bool orientation_required = needs_orientation(mode);
    if (orientation_required) require_orientation(scenario.passer);

    ScenarioEvaluation eval;
    eval.mode = mode;
    eval.breakdowns.reserve(scenario.receivers.size());
    const bool have_passer_orientation = scenario.passer.orientation.has_value();

    for (const auto& r : scenario.receivers) {
        FeasibilityBreakdown b;
        b.receiver_id = r.id;
        b.distance_to_passer = scenario.field.normalized_distance(scenario.passer.position, r.position);
        b.F_p = proximity_feasibility(scenario.passer, r, scenario.field);
        DefenseResult dp = passer_defense_feasibility(scenario, r.id, params);
        DefenseResult dr = receiver_defense_feasibility(scenario, r.id, dp.neighbors, params);
        b.F_dP = dp.value;
        b.F_dR = dr.value;
        b.F_d = dp.value * dr.value;
        b.F_pd = b.F_p * b.F_d;
        b.passer_neighbors = std::move(dp.neighbors);
        b.receiver_neighbors = std::move(dr.neighbors);

        if (orientation_required) require_orientation(r);
        if (have_passer_orientation && r.orientation) {
            OrientationGeometry g = orientation_geometry(scenario.passer, r, params);
            b.F_o = g.value;
            b.F = g.value * b.F_d * b.F_p;
            eval.geometry.push_back(std::move(g));
        } else {
            eval.geometry.emplace_back();
        }
        eval.breakdowns.push_back(std::move(b));
    }

    std::vector<double> scores;
    scores.reserve(eval.breakdowns.size());
    for (const auto& b : eval.breakdowns) scores.push_back(b.score(mode));
    eval.ranking = rank_receivers(eval.breakdowns, scores);
    return eval;
}

}  // namespace passfeas
