#include "priocomp/render.hpp"

#include <fstream>
#include <sstream>

#include "priocomp/csv.hpp"

namespace priocomp {

std::vector<FieldPoint> policy_field(const SamplerNet& sampler, const CompoundQ* cq,
                                     const EnvConfig& env_cfg, int grid_n, std::uint64_t seed) {
    if (grid_n < 2) throw std::invalid_argument("policy_field: grid must be >= 2");
    constexpr int kDrawsPerState = 32;
    const std::vector<Vec2> actions = action_grid(13, env_cfg.a_max);
    std::vector<FieldPoint> field;
    field.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    Rng rng(derive_seed(seed, 0xf1e1d));
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            FieldPoint p;
            p.state = {(i + 0.5) / grid_n, (j + 0.5) / grid_n};
            Vec2 mean{0, 0};
            for (int k = 0; k < kDrawsPerState; ++k) mean += sampler.sample(p.state, rng);
            p.mean_action = mean * (1.0 / kDrawsPerState);
            if (cq != nullptr) {
                const auto eval = cq->action_evaluator(p.state);
                Vec2 mode = actions.front();
                double best = eval(mode);
                for (const Vec2& a : actions) {
                    const double v = eval(a);
                    if (v > best) {
                        best = v;
                        mode = a;
                    }
                }
                p.weight_at_mode = cq->weight(p.state, mode);
            }
            field.push_back(p);
        }
    }
    return field;
}

void write_vector_field_csv(const std::filesystem::path& path,
                            std::span<const FieldPoint> field) {
    CsvWriter csv(path, "x,y,mean_action_dx,mean_action_dy,weight_at_mode");
    for (const FieldPoint& p : field) {
        csv.row(fmt_num(p.state.x) + "," + fmt_num(p.state.y) + "," + fmt_num(p.mean_action.x) +
                "," + fmt_num(p.mean_action.y) + "," + fmt_num(p.weight_at_mode));
    }
}

void write_trajectories_csv(const std::filesystem::path& path,
                            std::span<const Trajectory> trajectories) {
    CsvWriter csv(path, "traj,step,x,y,dx,dy,r1,r2,next_x,next_y,collision,done");
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        const Trajectory& traj = trajectories[t];
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const TrajStep& st = traj[k];
            csv.row(std::to_string(t) + "," + std::to_string(k) + "," + fmt_num(st.state.x) + "," +
                    fmt_num(st.state.y) + "," + fmt_num(st.action.x) + "," + fmt_num(st.action.y) +
                    "," + fmt_num(st.r1) + "," + fmt_num(st.r2) + "," + fmt_num(st.next_state.x) +
                    "," + fmt_num(st.next_state.y) + "," + (st.collision ? "1" : "0") + "," +
                    (st.done ? "1" : "0"));
        }
    }
}

namespace {

// Workspace [0,1]^2 mapped to a 600x600 canvas, y axis flipped for display.
constexpr double kCanvas = 600.0;

double px(double x) { return kCanvas * x; }
double py(double y) { return kCanvas * (1.0 - y); }

}  // namespace

void write_scene_svg(const std::filesystem::path& path, const EnvConfig& env_cfg,
                     std::span<const FieldPoint> field,
                     std::span<const Trajectory> trajectories) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("svg: cannot open '" + path.string() + "' for write");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
           "viewBox=\"0 0 600 600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"#ffffff\" "
           "stroke=\"#202020\"/>\n";
    for (const Rect& r : env_cfg.obstacle_rects) {
        out << "<rect x=\"" << fmt_num(px(r.xmin)) << "\" y=\"" << fmt_num(py(r.ymax))
            << "\" width=\"" << fmt_num(px(r.xmax - r.xmin)) << "\" height=\""
            << fmt_num(px(r.ymax - r.ymin)) << "\" fill=\"#5a5a5a\"/>\n";
    }
    if (env_cfg.variant != EnvVariant::obstacle) {
        out << "<circle cx=\"" << fmt_num(px(env_cfg.goal_center.x)) << "\" cy=\""
            << fmt_num(py(env_cfg.goal_center.y)) << "\" r=\""
            << fmt_num(kCanvas * env_cfg.goal_radius)
            << "\" fill=\"#7fbf7f\" stroke=\"#2f6f2f\"/>\n";
    }
    // Arrow glyphs: shaft plus a short head, scaled up from action units.
    const double scale = 6.0;
    for (const FieldPoint& p : field) {
        const double x0 = px(p.state.x), y0 = py(p.state.y);
        const double x1 = px(p.state.x + scale * p.mean_action.x);
        const double y1 = py(p.state.y + scale * p.mean_action.y);
        out << "<line x1=\"" << fmt_num(x0) << "\" y1=\"" << fmt_num(y0) << "\" x2=\""
            << fmt_num(x1) << "\" y2=\"" << fmt_num(y1)
            << "\" stroke=\"#4060c0\" stroke-width=\"1\"/>\n";
        out << "<circle cx=\"" << fmt_num(x1) << "\" cy=\"" << fmt_num(y1)
            << "\" r=\"1.5\" fill=\"#4060c0\"/>\n";
    }
    const char* colors[] = {"#c03030", "#c08030", "#30a0a0", "#a030a0"};
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
        if (trajectories[t].empty()) continue;
        std::ostringstream pts;
        pts << fmt_num(px(trajectories[t].front().state.x)) << ","
            << fmt_num(py(trajectories[t].front().state.y));
        for (const TrajStep& st : trajectories[t])
            pts << " " << fmt_num(px(st.next_state.x)) << "," << fmt_num(py(st.next_state.y));
        out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
            << colors[t % 4] << "\" stroke-width=\"2\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace priocomp
