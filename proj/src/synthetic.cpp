#include <algorithm>
#include <cmath>
#include <random>

#include "passfeas/data_io.hpp"
#include "passfeas/error.hpp"

namespace passfeas {

namespace {

struct RowSpec {
    int count;
    double depth;  // along the attack axis, meters from the attacking team's own goal line
    Role role;
};

class Pitch {
public:
    explicit Pitch(const FieldSpec& field) : field_(field) {}

    // Converts (depth along attack, lateral) into field coordinates.
    Point2 place(double depth, double lateral) const {
        depth = std::clamp(depth, 1.0, field_.length - 1.0);
        lateral = std::clamp(lateral, 1.0, field_.width - 1.0);
        const double x = field_.attack_direction == AttackDirection::PositiveX ? depth : field_.length - depth;
        return {x, lateral};
    }

private:
    const FieldSpec& field_;
};

std::vector<PlayerState> place_rows(const std::vector<RowSpec>& rows, const std::string& prefix,
                                    const Pitch& pitch, double width, std::mt19937_64& rng) {
    std::normal_distribution<double> jitter(0.0, 2.5);
    std::vector<PlayerState> players;
    int number = 1;
    for (const auto& row : rows) {
        for (int i = 0; i < row.count; ++i) {
            const double lateral = width * (static_cast<double>(i) + 0.5) / row.count;
            PlayerState p;
            p.id = prefix + std::to_string(number++);
            p.position = pitch.place(row.depth + jitter(rng), lateral + jitter(rng));
            p.role = row.role;
            players.push_back(std::move(p));
        }
    }
    return players;
}

void separate_from(std::vector<PlayerState>& players, const std::vector<Point2>& occupied) {
    for (auto& p : players) {
        for (const Point2& o : occupied) {
            if (distance(p.position, o) < 1e-6) p.position.y += 0.5;
        }
    }
}

}  // namespace

std::vector<Scenario> generate_synthetic(const SynthConfig& config, const ModelParams& params) {
    if (config.n_events < 1) throw Error("synthetic corpus needs at least one event");
    if (!(config.temperature > 0.0)) throw Error("softmax temperature must be positive");
    if (!(config.orientation_noise >= 0.0)) throw Error("orientation noise must be non-negative");
    const double pressure = std::clamp(config.pressure, 0.0, 1.0);
    const FieldSpec& field = config.field;
    const Pitch pitch(field);

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, config.orientation_noise);

    std::vector<Scenario> out;
    out.reserve(static_cast<std::size_t>(config.n_events));
    for (int event = 0; event < config.n_events; ++event) {
        // Middle line of the defensive block, scaled to the field length.
        const double block = field.length * (0.25 + 0.5 * unit(rng));
        const std::vector<RowSpec> attack_rows = {
            {4, block - 0.28 * field.length, Role::Defender},
            {3, block - 0.05 * field.length, Role::Midfielder},
            {3, block + 0.12 * field.length, Role::Forward},
        };
        const std::vector<RowSpec> defense_rows = {
            {2, block - 0.15 * field.length, Role::Forward},
            {4, block, Role::Midfielder},
            {4, block + 0.14 * field.length, Role::Defender},
        };
        std::vector<PlayerState> attackers = place_rows(attack_rows, "a", pitch, field.width, rng);
        std::vector<PlayerState> defenders = place_rows(defense_rows, "d", pitch, field.width, rng);
        PlayerState keeper;
        keeper.id = "d11";
        keeper.position = pitch.place(field.length - 4.0, field.width / 2.0);
        keeper.role = Role::Goalkeeper;
        defenders.push_back(keeper);

        // Marking: each outfield defender drifts towards its nearest attacker.
        for (auto& d : defenders) {
            if (d.role == Role::Goalkeeper) continue;
            const PlayerState* nearest = nullptr;
            double best = 1e300;
            for (const auto& a : attackers) {
                const double dist = distance(d.position, a.position);
                if (dist < best) {
                    best = dist;
                    nearest = &a;
                }
            }
            const double pull = 0.75 * pressure;
            d.position = d.position + pull * (nearest->position - d.position);
        }
        std::vector<Point2> taken;
        for (const auto& a : attackers) taken.push_back(a.position);
        separate_from(defenders, taken);

        const std::size_t passer_index = static_cast<std::size_t>(unit(rng) * attackers.size()) % attackers.size();
        Scenario s;
        s.event_id = "syn-" + std::to_string(config.seed) + "-" + std::to_string(event);
        s.field = field;
        s.passer = attackers[passer_index];
        for (std::size_t i = 0; i < attackers.size(); ++i) {
            if (i != passer_index) s.receivers.push_back(attackers[i]);
        }
        s.defenders = std::move(defenders);

        const PlayerState& target = s.receivers[static_cast<std::size_t>(unit(rng) * s.receivers.size()) %
                                                s.receivers.size()];
        s.passer.orientation =
            wrap_degrees(angle_of(s.passer.position, target.position) + noise(rng));
        for (auto& r : s.receivers) {
            // Most receivers face the ball, some are turned away.
            const double facing = angle_of(r.position, s.passer.position);
            const double base = unit(rng) < 0.7 ? facing : 360.0 * unit(rng);
            r.orientation = wrap_degrees(base + noise(rng));
        }
        for (auto& d : s.defenders) d.orientation = wrap_degrees(angle_of(d.position, s.passer.position));

        const ScenarioEvaluation eval = evaluate_scenario(s, params, ScoreMode::F);
        if (config.planted_best) {
            s.ground_truth_receiver = eval.predicted().receiver_id;
            s.success = true;
        } else {
            double top = 0.0;
            for (const auto& b : eval.breakdowns) top = std::max(top, *b.F);
            std::vector<double> weights;
            for (const auto& b : eval.breakdowns) weights.push_back(std::exp((*b.F - top) / config.temperature));
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            const auto& chosen = eval.breakdowns[pick(rng)];
            s.ground_truth_receiver = chosen.receiver_id;
            const double p_success = top > 0.0 ? std::clamp(*chosen.F / top, 0.1, 0.9) : 0.5;
            s.success = unit(rng) < p_success;
        }
        validate(s);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace passfeas
