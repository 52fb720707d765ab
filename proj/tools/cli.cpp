#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "rayforge/io.hpp"
#include "rayforge/parallel.hpp"
#include "rayforge/rays.hpp"
#include "rayforge/render.hpp"
#include "rayforge/symbolic.hpp"

namespace rayforge::cli {

namespace {

struct MapFlags {
    std::string family = "exp";
    std::string lambda = "-1,0";
    std::string a = "1,0";
    std::string b = "1,0";
    double alpha = 1.0;
    double radius = 10.0;

    void add(CLI::App& app) {
        app.add_option("--family", family, "exp, cosine or bf")->check(CLI::IsMember({"exp", "cosine", "bf"}));
        app.add_option("--lambda", lambda, "Exp parameter \"re,im\"");
        app.add_option("--a", a, "Cosine parameter a \"re,im\"");
        app.add_option("--b", b, "Cosine parameter b \"re,im\"");
        app.add_option("--alpha", alpha, "ScaledBF scale");
        app.add_option("--radius", radius, "partition radius R");
    }

    MapSpec map() const {
        if (family == "exp") return MapSpec::exponential(parse_complex(lambda));
        if (family == "cosine") return MapSpec::cosine(parse_complex(a), parse_complex(b));
        return MapSpec::scaled_bf(alpha);
    }
};

SearchBox parse_box(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_complex(item).real());
    if (v.size() != 4) throw Error(ErrorCode::Parse, "expected \"reMin,reMax,imMin,imMax\"");
    return {v[0], v[1], v[2], v[3]};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& data, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << data;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + path);
    f << data;
}

// --config file.json: each key becomes --key value, inserted before the
// remaining command-line arguments so explicit flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    std::vector<std::string> fromConfig;
    std::size_t insertAt = std::min<std::size_t>(args.size(), 2);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            Json j;
            try {
                j = Json::parse(read_file(args[i + 1]));
            } catch (const Json::exception& e) {
                throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
            }
            if (!j.is_object()) throw Error(ErrorCode::Parse, "config must be a JSON object");
            for (const auto& [key, value] : j.items()) {
                const std::string flag = "--" + key;
                auto push = [&](const Json& v) {
                    if (v.is_boolean()) {
                        if (v.get<bool>()) fromConfig.push_back(flag);
                    } else {
                        fromConfig.push_back(flag);
                        fromConfig.push_back(v.is_string() ? v.get<std::string>() : v.dump());
                    }
                };
                if (value.is_array()) {
                    for (const auto& v : value) push(v);
                } else {
                    push(value);
                }
            }
            ++i;
            continue;
        }
        out.push_back(args[i]);
    }
    insertAt = std::min(insertAt, out.size());
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(insertAt), fromConfig.begin(), fromConfig.end());
    return out;
}

// ---------------------------------------------------------------------------

struct TraceArgs {
    MapFlags map;
    std::string address;
    int depth = 40;
    int samples = 16;
    bool noLanding = false;
    std::string outPath;
};

int cmd_trace(const TraceArgs& a, std::ostream& out) {
    const MapSpec map = a.map.map();
    const ExternalAddress address = parse_address(a.address);
    const PartitionSpec partition = build_partition(map, a.map.radius);
    Curve ray = address.is_periodic() ? trace_ray(partition, address, a.depth, a.samples)
                                      : trace_preperiodic_ray(partition, address, a.depth, a.samples);
    if (!ray.converged) throw Error(ErrorCode::NotConverged, "ray sweeps did not settle");
    std::vector<CurveSample> rows;
    if (!a.noLanding && address.is_periodic()) {
        const LandingEstimate landing = landing_point(ray, map, static_cast<int>(address.period.size()));
        rows.push_back({0.0, landing.estimate});
    }
    rows.insert(rows.end(), ray.samples.begin(), ray.samples.end());
    emit(ray_csv(rows), a.outPath, out);
    return kOk;
}

struct VerifyArgs {
    MapFlags map;
    std::string address;
    int depth = 40;
    int samples = 16;
    std::string box = "-5,5,-12,12";
    int grid = 40;
    std::string outPath;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const MapSpec map = a.map.map();
    const ExternalAddress address = parse_address(a.address);
    if (!address.is_periodic()) throw Error(ErrorCode::InvalidArgument, "landing needs a periodic address");
    const SearchBox box = parse_box(a.box);
    const PartitionSpec partition = build_partition(map, a.map.radius);
    std::vector<PeriodicPointRecord> points;
    if (!box.degenerate()) {
        points = find_periodic_points(map, static_cast<int>(address.period.size()), box, a.grid);
    }
    const LandingReport report = verify_landing(partition, address, points, {a.depth, a.samples});
    emit(dump_json(to_json(report)), a.outPath, out);
    if (!report.matchedPeriodicPoint) return kNoMatch;
    return report.converged ? kOk : kNotConverged;
}

struct RenderArgs {
    MapFlags map;
    std::string viewport = "-4,4,-4,4";
    int width = 256;
    int height = 256;
    int maxIter = 50;
    double escapeRadius = 50.0;
    std::string format = "pgm";
    std::vector<std::string> rayCsv;
    std::vector<std::string> pointsJson;
    std::string outPath;
};

int cmd_render(const RenderArgs& a, std::ostream& out) {
    const MapSpec map = a.map.map();
    RenderConfig config;
    const SearchBox v = parse_box(a.viewport);
    config.viewport = {v.reMin, v.reMax, v.imMin, v.imMax};
    config.width = a.width;
    config.height = a.height;
    config.maxIter = a.maxIter;
    config.escapeRadius = a.escapeRadius;
    try {
        validate(config);
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
    for (const auto& path : a.rayCsv) {
        std::vector<Complex> line;
        for (const auto& s : parse_ray_csv(read_file(path))) line.push_back(s.z);
        config.rays.push_back(std::move(line));
    }
    for (const auto& path : a.pointsJson) {
        Json j;
        try {
            j = Json::parse(read_file(path));
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::Parse, path + ": " + e.what());
        }
        if (!j.is_array()) throw Error(ErrorCode::Parse, path + ": expected an array");
        for (const auto& item : j) {
            config.points.push_back(item.is_object() ? periodic_point_from_json(item).point
                                                     : complex_from_json(item));
        }
    }
    const auto gray = escape_raster(map, config, worker_count());
    emit(a.format == "ppm" ? encode_ppm(config, gray) : encode_pgm(config, gray), a.outPath, out);
    return kOk;
}

struct PullbackArgs {
    MapFlags map;
    std::string z0;
    std::string straight;
    std::string legCsv;
    double length = 40.0;
    int count = 400;
    int iterations = 30;
    std::string outPath;
};

int cmd_pullback(const PullbackArgs& a, std::ostream& out) {
    const MapSpec map = a.map.map();
    const Complex z0 = parse_complex(a.z0);
    if (a.straight.empty() == a.legCsv.empty()) {
        throw Error(ErrorCode::Parse, "give exactly one of --straight and --leg");
    }
    Curve leg;
    if (!a.straight.empty()) {
        const Complex dir = parse_complex(a.straight);
        if (dir == Complex{0.0, 0.0}) throw Error(ErrorCode::Parse, "--straight direction is zero");
        leg = straight_leg(z0, dir, a.length, a.count);
    } else {
        leg.kind = CurveKind::Leg;
        leg.samples = parse_ray_csv(read_file(a.legCsv));
        leg.anchor = z0;
    }
    const PartitionSpec partition = build_partition(map, a.map.radius);
    const auto steps = pullback_sequence(partition, z0, leg, a.iterations);
    std::vector<std::optional<Symbol>> symbols;
    for (const auto& s : steps) symbols.push_back(s.tailSymbol);
    const auto period = eventual_period(symbols);
    emit(dump_json(pullback_json(steps, period)), a.outPath, out);
    return a.iterations == 0 || period ? kOk : kNotConverged;
}

} // namespace

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotConverged:
    case ErrorCode::DivergentHead:
    case ErrorCode::Overflow:
        return kNotConverged;
    case ErrorCode::ContinuationAmbiguous:
        return kAmbiguous;
    default:
        return kUsage;
    }
}

int run(const std::vector<std::string>& rawArgs, std::ostream& out, std::ostream& err) {
    CLI::App app{"Periodic dynamic rays of transcendental entire maps"};
    app.name("rayforge");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    TraceArgs trace;
    auto* t = app.add_subcommand("trace", "trace a dynamic ray and print it as CSV");
    trace.map.add(*t);
    t->add_option("--address", trace.address, "external address, e.g. \"[| 0 1]\"")->required();
    t->add_option("--depth", trace.depth)->check(CLI::Range(10, 1000));
    t->add_option("--samples", trace.samples)->check(CLI::Range(1, 256));
    t->add_flag("--no-landing", trace.noLanding, "omit the t = 0 landing row");
    t->add_option("--out", trace.outPath);

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify-landing", "verify where a periodic ray lands");
    verify.map.add(*v);
    v->add_option("--address", verify.address)->required();
    v->add_option("--depth", verify.depth)->check(CLI::Range(10, 1000));
    v->add_option("--samples", verify.samples)->check(CLI::Range(1, 256));
    v->add_option("--period-search-box", verify.box, "\"reMin,reMax,imMin,imMax\"");
    v->add_option("--grid", verify.grid)->check(CLI::Range(1, 2000));
    v->add_option("--out", verify.outPath);

    RenderArgs render;
    auto* r = app.add_subcommand("render", "escape-time raster as PGM or PPM");
    render.map.add(*r);
    r->add_option("--viewport", render.viewport, "\"reMin,reMax,imMin,imMax\"");
    r->add_option("--width", render.width);
    r->add_option("--height", render.height);
    r->add_option("--max-iter", render.maxIter);
    r->add_option("--escape-radius", render.escapeRadius);
    r->add_option("--format", render.format)->check(CLI::IsMember({"pgm", "ppm"}));
    r->add_option("--ray-csv", render.rayCsv)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    r->add_option("--points-json", render.pointsJson)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    r->add_option("--out", render.outPath)->required();

    PullbackArgs pull;
    auto* p = app.add_subcommand("pullback", "iterate the leg map at a repelling fixed point");
    pull.map.add(*p);
    p->add_option("--z0", pull.z0, "fixed point \"re,im\"")->required();
    p->add_option("--straight", pull.straight, "direction \"re,im\" of a straight leg");
    p->add_option("--leg", pull.legCsv, "leg as CSV t,re,im");
    p->add_option("--length", pull.length);
    p->add_option("--count", pull.count)->check(CLI::Range(2, 1000000));
    p->add_option("--iterations", pull.iterations)->check(CLI::Range(0, 1000));
    p->add_option("--out", pull.outPath);

    try {
        const std::vector<std::string> args = expand_config(rawArgs);
        std::vector<const char*> argv;
        for (const auto& s : args) argv.push_back(s.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kOk;
        } catch (const CLI::ParseError& e) {
            err << "usage: " << e.what() << "\n";
            return kUsage;
        }
        if (t->parsed()) return cmd_trace(trace, out);
        if (v->parsed()) return cmd_verify(verify, out);
        if (r->parsed()) return cmd_render(render, out);
        return cmd_pullback(pull, out);
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    }
}

} // namespace rayforge::cli
