#include "hypercurve/job.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "hypercurve/expr.hpp"
#include "hypercurve/integrate.hpp"
#include "hypercurve/paths.hpp"
#include "hypercurve/props.hpp"

namespace hypercurve::job {

namespace {

using json = nlohmann::ordered_json;

std::string join_key(std::string_view where, std::string_view key) {
    if (where.empty()) return std::string(key);
    return std::string(where) + "." + std::string(key);
}

// ---------------------------------------------------------------- readers

void check_keys(const toml::table& t, std::string_view where, std::initializer_list<std::string_view> allowed) {
    for (auto&& [key, node] : t) {
        (void)node;
        bool ok = false;
        for (auto a : allowed) ok = ok || key.str() == a;
        if (!ok) throw SchemaError(join_key(where, key.str()), "unknown key");
    }
}

const toml::table& require_table(const toml::node* node, const std::string& where) {
    if (!node || !node->is_table()) throw SchemaError(where, "expected a table");
    return *node->as_table();
}

bool has(const toml::table& t, std::string_view key) { return t.get(key) != nullptr; }

double get_number(const toml::table& t, std::string_view key, std::string_view where) {
    const auto* node = t.get(key);
    if (!node) throw SchemaError(join_key(where, key), "missing required number");
    if (const auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) {
        if (!std::isfinite(*v)) throw SchemaError(join_key(where, key), "number must be finite");
        return *v;
    }
    throw SchemaError(join_key(where, key), "expected a number");
}

double get_number_or(const toml::table& t, std::string_view key, std::string_view where, double fallback) {
    return has(t, key) ? get_number(t, key, where) : fallback;
}

std::int64_t get_int(const toml::table& t, std::string_view key, std::string_view where) {
    const auto* node = t.get(key);
    if (!node) throw SchemaError(join_key(where, key), "missing required integer");
    if (!node->is_integer()) throw SchemaError(join_key(where, key), "expected an integer");
    return node->as_integer()->get();
}

std::string get_string(const toml::table& t, std::string_view key, std::string_view where) {
    const auto* node = t.get(key);
    if (!node) throw SchemaError(join_key(where, key), "missing required string");
    if (!node->is_string()) throw SchemaError(join_key(where, key), "expected a string");
    return node->as_string()->get();
}

expr::Expr parse_at(const std::string& text, const std::string& where) {
    try {
        return expr::parse(text);
    } catch (const expr::ParseError& err) {
        throw SchemaError(where, "expected " + err.expected() + " at offset " + std::to_string(err.position()) +
                                     " of \"" + text + "\", found " + err.found());
    }
}

/// A string in the expression language or a bare number.
expr::Expr get_expr(const toml::table& t, std::string_view key, std::string_view where) {
    const auto* node = t.get(key);
    const auto at = join_key(where, key);
    if (!node) throw SchemaError(at, "missing required expression");
    if (node->is_string()) return parse_at(node->as_string()->get(), at);
    if (node->is_integer() || node->is_floating_point()) return parse_at(format_real(*node->value<double>()), at);
    throw SchemaError(at, "expected an expression string or a number");
}

BiComplex constant_value(const expr::Expr& e, const std::string& at) {
    if (const auto vars = expr::free_variables(e); !vars.empty()) {
        throw SchemaError(at, "a constant may not use variable '" + vars.front() + "'");
    }
    try {
        return expr::eval(e);
    } catch (const Error& err) {
        throw SchemaError(at, err.what());
    }
}

Hyperbolic hyperbolic_value(const expr::Expr& e, const std::string& at) {
    const auto v = constant_value(e, at);
    if (v.w1.imag() != 0.0 || v.w2.imag() != 0.0) {
        throw SchemaError(at, "expected a hyperbolic number, got " + format_cartesian(v));
    }
    return {v.w1.real(), v.w2.real()};
}

std::array<double, 2> get_domain(const toml::table& t, std::string_view key, std::string_view where) {
    const auto at = join_key(where, key);
    const auto* node = t.get(key);
    if (!node) throw SchemaError(at, "missing required [lo, hi] pair");
    const auto* arr = node->as_array();
    if (!arr || arr->size() != 2) throw SchemaError(at, "expected a [lo, hi] pair");
    std::array<double, 2> out{};
    for (std::size_t k = 0; k < 2; ++k) {
        const auto v = (*arr)[k].value<double>();
        if (!v || !std::isfinite(*v)) throw SchemaError(at + "[" + std::to_string(k) + "]", "expected a number");
        out[k] = *v;
    }
    if (out[1] < out[0]) throw SchemaError(at, "domain is reversed");
    return out;
}

std::string printed(const expr::Expr& e) { return expr::print(e); }

// ---------------------------------------------------------------- job model

struct Settings {
    Hyperbolic tol{1e-9, 1e-9};
    int max_levels = 24;
    int min_levels = 4;
    Tag tag = Tag::Midpoint;

    IntegrationConfig config() const {
        IntegrationConfig cfg;
        cfg.tol = tol;
        cfg.max_levels = max_levels;
        cfg.min_levels = min_levels;
        cfg.tag = tag;
        return cfg;
    }

    json echo() const {
        return json{{"tol", {tol.v1, tol.v2}},
                    {"max_levels", max_levels},
                    {"min_levels", min_levels},
                    {"tag", std::string(to_string(tag))}};
    }
};

struct PathDef {
    DPath path;
    json echo;
};

struct FunctionDef {
    Integrand f;
    std::optional<Integrand> primitive;
    json echo;
};

struct TaskDef {
    std::size_t index = 0;
    std::string id;
    std::string type;
    std::string path;
    std::string function;
    Settings settings;
    std::string method = "direct";
    int samples = 4096;
    std::string suite;
    std::uint64_t seed = 0;
    int instances = 0;
    double threshold = 1e-6;
};

struct Job {
    Settings defaults;
    std::uint64_t seed = 0;
    std::map<std::string, PathDef> paths;
    std::map<std::string, FunctionDef> functions;
    std::vector<TaskDef> tasks;
};

Tag parse_tag(const std::string& text, const std::string& at) {
    if (text == "left") return Tag::Left;
    if (text == "midpoint") return Tag::Midpoint;
    if (text == "right") return Tag::Right;
    throw SchemaError(at, "tag must be left, midpoint or right, got '" + text + "'");
}

/// Reads the tolerance and refinement keys shared by [config] and tasks.
void read_settings(const toml::table& t, std::string_view where, Settings& s) {
    if (const auto* node = t.get("tol")) {
        const auto at = join_key(where, "tol");
        if (const auto* arr = node->as_array()) {
            if (arr->size() != 2) throw SchemaError(at, "expected a number or a pair of numbers");
            const auto a = (*arr)[0].value<double>();
            const auto b = (*arr)[1].value<double>();
            if (!a || !b) throw SchemaError(at, "expected a pair of numbers");
            s.tol = {*a, *b};
        } else {
            const double v = get_number(t, "tol", where);
            s.tol = {v, v};
        }
        if (!(s.tol.v1 > 0.0) || !(s.tol.v2 > 0.0)) throw SchemaError(at, "tolerance must be positive");
    }
    if (has(t, "max_levels")) {
        const auto v = get_int(t, "max_levels", where);
        if (v < 1 || v > 40) throw SchemaError(join_key(where, "max_levels"), "must be between 1 and 40");
        s.max_levels = static_cast<int>(v);
    }
    if (has(t, "min_levels")) {
        const auto v = get_int(t, "min_levels", where);
        if (v < 0 || v > 40) throw SchemaError(join_key(where, "min_levels"), "must be between 0 and 40");
        s.min_levels = static_cast<int>(v);
    }
    if (has(t, "tag")) s.tag = parse_tag(get_string(t, "tag", where), join_key(where, "tag"));
}

std::uint64_t read_seed(const toml::table& t, std::string_view where) {
    const auto v = get_int(t, "seed", where);
    if (v < 0) throw SchemaError(join_key(where, "seed"), "seed must be non-negative");
    return static_cast<std::uint64_t>(v);
}

PathDef read_path(const toml::table& t, const std::string& where) {
    const auto kind = get_string(t, "kind", where);
    json echo{{"kind", kind}};
    auto wrap = [&](auto&& build) {
        try {
            return build();
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& err) {
            throw SchemaError(where, err.what());
        }
    };

    if (kind == "identity") {
        check_keys(t, where, {"kind", "lo", "hi"});
        const auto lo = get_expr(t, "lo", where);
        const auto hi = get_expr(t, "hi", where);
        echo["lo"] = printed(lo);
        echo["hi"] = printed(hi);
        const auto a = hyperbolic_value(lo, join_key(where, "lo"));
        const auto b = hyperbolic_value(hi, join_key(where, "hi"));
        return wrap([&] { return PathDef{DPath::identity(DInterval::make(a, b)), echo}; });
    }
    if (kind == "segment") {
        check_keys(t, where, {"kind", "from", "to"});
        const auto from = get_expr(t, "from", where);
        const auto to = get_expr(t, "to", where);
        echo["from"] = printed(from);
        echo["to"] = printed(to);
        const auto a = constant_value(from, join_key(where, "from"));
        const auto b = constant_value(to, join_key(where, "to"));
        return wrap([&] { return PathDef{DPath::segment(a, b), echo}; });
    }
    if (kind == "bicircle") {
        check_keys(t, where, {"kind", "center", "radius", "turns"});
        const auto center = has(t, "center") ? get_expr(t, "center", where) : expr::parse("0");
        const double radius = get_number(t, "radius", where);
        const double turns = get_number_or(t, "turns", where, 1.0);
        if (!(radius > 0.0)) throw SchemaError(join_key(where, "radius"), "radius must be positive");
        if (!(turns > 0.0)) throw SchemaError(join_key(where, "turns"), "turns must be positive");
        echo["center"] = printed(center);
        echo["radius"] = radius;
        echo["turns"] = turns;
        const auto c = constant_value(center, join_key(where, "center"));
        return wrap([&] { return PathDef{DPath::bicircle(c, radius, turns), echo}; });
    }
    if (kind == "expr") {
        check_keys(t, where, {"kind", "gamma", "gamma1", "gamma2", "domain1", "domain2"});
        const bool single = has(t, "gamma");
        if (single && (has(t, "gamma1") || has(t, "gamma2"))) {
            throw SchemaError(join_key(where, "gamma"), "give either gamma or gamma1/gamma2, not both");
        }
        const auto g1 = get_expr(t, single ? "gamma" : "gamma1", where);
        const auto g2 = single ? g1 : get_expr(t, "gamma2", where);
        const auto d1 = get_domain(t, "domain1", where);
        const auto d2 = get_domain(t, "domain2", where);
        if (single) {
            echo["gamma"] = printed(g1);
        } else {
            echo["gamma1"] = printed(g1);
            echo["gamma2"] = printed(g2);
        }
        echo["domain1"] = {d1[0], d1[1]};
        echo["domain2"] = {d2[0], d2[1]};
        return wrap([&] {
            return PathDef{DPath(ComponentPath::expression(g1, 0, d1[0], d1[1]),
                                 ComponentPath::expression(g2, 1, d2[0], d2[1])),
                           echo};
        });
    }
    if (kind == "polyline") {
        check_keys(t, where, {"kind", "params1", "values1", "params2", "values2"});
        std::array<ComponentPath, 2> parts{ComponentPath::point(0.0, 0.0), ComponentPath::point(0.0, 0.0)};
        for (int k = 0; k < 2; ++k) {
            const auto pk = "params" + std::to_string(k + 1);
            const auto vk = "values" + std::to_string(k + 1);
            const auto* params = t.get(pk) ? t.get(pk)->as_array() : nullptr;
            const auto* values = t.get(vk) ? t.get(vk)->as_array() : nullptr;
            if (!params) throw SchemaError(join_key(where, pk), "expected an array of numbers");
            if (!values) throw SchemaError(join_key(where, vk), "expected an array of values");
            if (params->size() != values->size()) {
                throw SchemaError(join_key(where, vk), "needs one value per parameter");
            }
            std::vector<double> xs;
            std::vector<Complex> ys;
            json pecho = json::array();
            json vecho = json::array();
            for (std::size_t m = 0; m < params->size(); ++m) {
                const auto at = join_key(where, pk) + "[" + std::to_string(m) + "]";
                const auto x = (*params)[m].value<double>();
                if (!x || !std::isfinite(*x)) throw SchemaError(at, "expected a number");
                xs.push_back(*x);
                pecho.push_back(*x);
                const auto vat = join_key(where, vk) + "[" + std::to_string(m) + "]";
                const auto& vnode = (*values)[m];
                expr::Expr e;
                if (vnode.is_string()) {
                    e = parse_at(vnode.as_string()->get(), vat);
                } else if (const auto num = vnode.value<double>()) {
                    e = parse_at(format_real(*num), vat);
                } else {
                    throw SchemaError(vat, "expected an expression string or a number");
                }
                (void)constant_value(e, vat);
                ys.push_back(expr::eval_component(e, {}, k));
                vecho.push_back(printed(e));
            }
            echo[pk] = pecho;
            echo[vk] = vecho;
            parts[static_cast<std::size_t>(k)] = wrap([&] { return ComponentPath::polyline(xs, ys); });
        }
        return wrap([&] { return PathDef{DPath(parts[0], parts[1]), echo}; });
    }
    throw SchemaError(join_key(where, "kind"),
                      "unknown path kind '" + kind + "' (expected identity, segment, bicircle, expr or polyline)");
}

FunctionDef read_function(const toml::table& t, const std::string& where) {
    check_keys(t, where, {"f", "f1", "f2", "F", "F1", "F2", "var"});
    const std::string var = has(t, "var") ? get_string(t, "var", where) : "z";
    json echo = json::object();
    if (var != "z") echo["var"] = var;

    auto read_pair = [&](std::string_view one, std::string_view a, std::string_view b,
                         bool required) -> std::optional<Integrand> {
        const bool single = has(t, one);
        const bool split = has(t, a) || has(t, b);
        if (single && split) {
            throw SchemaError(join_key(where, one), "give either " + std::string(one) + " or " + std::string(a) +
                                                        "/" + std::string(b) + ", not both");
        }
        if (!single && !split) {
            if (required) throw SchemaError(join_key(where, one), "missing required expression");
            return std::nullopt;
        }
        try {
            if (single) {
                const auto e = get_expr(t, one, where);
                echo[std::string(one)] = printed(e);
                return Integrand::from_expression(e, var);
            }
            const auto e1 = get_expr(t, a, where);
            const auto e2 = get_expr(t, b, where);
            echo[std::string(a)] = printed(e1);
            echo[std::string(b)] = printed(e2);
            return Integrand::from_components(e1, e2, var);
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& err) {
            throw SchemaError(join_key(where, single ? one : a), err.what());
        }
    };
    auto f = read_pair("f", "f1", "f2", true);
    auto F = read_pair("F", "F1", "F2", false);
    return FunctionDef{*f, F, echo};
}

bool needs_path(std::string_view type) { return type != "props-check"; }

bool needs_function(std::string_view type) {
    return type == "integrate" || type == "line-integral" || type == "arclength-integral" || type == "ftc-check" ||
           type == "ml-bound";
}

TaskDef read_task(const toml::table& t, std::size_t index, const Job& job, const RunOptions& opts) {
    const std::string where = "tasks[" + std::to_string(index) + "]";
    check_keys(t, where,
               {"type", "id", "path", "function", "tol", "max_levels", "min_levels", "tag", "method", "samples",
                "suite", "seed", "instances", "threshold"});
    TaskDef task;
    task.index = index;
    task.type = get_string(t, "type", where);
    static constexpr std::string_view kTypes[] = {"variation",  "length",    "integrate", "line-integral",
                                                  "arclength-integral", "ftc-check", "ml-bound",  "props-check"};
    if (std::find(std::begin(kTypes), std::end(kTypes), task.type) == std::end(kTypes)) {
        throw SchemaError(join_key(where, "type"), "unknown task type '" + task.type + "'");
    }
    task.id = has(t, "id") ? get_string(t, "id", where) : task.type + "-" + std::to_string(index);
    task.settings = job.defaults;
    read_settings(t, where, task.settings);

    if (needs_path(task.type)) {
        task.path = get_string(t, "path", where);
        if (!job.paths.count(task.path)) {
            throw SchemaError(join_key(where, "path"), "undefined path '" + task.path + "'");
        }
    }
    if (needs_function(task.type)) {
        task.function = get_string(t, "function", where);
        const auto it = job.functions.find(task.function);
        if (it == job.functions.end()) {
            throw SchemaError(join_key(where, "function"), "undefined function '" + task.function + "'");
        }
        if (task.type == "ftc-check" && !it->second.primitive) {
            throw SchemaError(join_key(where, "function"),
                              "function '" + task.function + "' has no primitive F for ftc-check");
        }
    }
    if (has(t, "method")) {
        task.method = get_string(t, "method", where);
        const bool ok = task.method == "direct" || task.method == "componentwise" ||
                        (task.method == "smooth" && task.type == "line-integral");
        const bool integral = task.type == "integrate" || task.type == "line-integral";
        if (!ok || !integral) {
            throw SchemaError(join_key(where, "method"), "method '" + task.method + "' does not apply to " + task.type);
        }
    }
    if (has(t, "samples")) {
        const auto v = get_int(t, "samples", where);
        if (v < 2) throw SchemaError(join_key(where, "samples"), "need at least 2 samples");
        task.samples = static_cast<int>(v);
    }
    if (has(t, "threshold")) {
        task.threshold = get_number(t, "threshold", where);
        if (!(task.threshold > 0.0)) throw SchemaError(join_key(where, "threshold"), "must be positive");
    }
    if (task.type == "props-check") {
        task.suite = get_string(t, "suite", where);
        try {
            (void)props::default_instances(task.suite);
        } catch (const Error& err) {
            throw SchemaError(join_key(where, "suite"), err.what());
        }
        task.seed = has(t, "seed") ? read_seed(t, where) : opts.seed.value_or(job.seed);
        if (has(t, "instances")) {
            const auto v = get_int(t, "instances", where);
            if (v < 1) throw SchemaError(join_key(where, "instances"), "must be at least 1");
            task.instances = static_cast<int>(v);
        }
    }
    return task;
}

Job read_job(const toml::table& root, const RunOptions& opts) {
    check_keys(root, "", {"config", "paths", "functions", "tasks"});
    Job job;
    if (opts.default_tol) job.defaults.tol = {*opts.default_tol, *opts.default_tol};
    if (const auto* node = root.get("config")) {
        const auto& cfg = require_table(node, "config");
        check_keys(cfg, "config", {"tol", "max_levels", "min_levels", "tag", "seed"});
        read_settings(cfg, "config", job.defaults);
        if (has(cfg, "seed")) job.seed = read_seed(cfg, "config");
    }
    if (opts.seed) job.seed = *opts.seed;
    if (const auto* node = root.get("paths")) {
        for (auto&& [name, def] : require_table(node, "paths")) {
            const auto where = "paths." + std::string(name.str());
            job.paths.emplace(std::string(name.str()), read_path(require_table(&def, where), where));
        }
    }
    if (const auto* node = root.get("functions")) {
        for (auto&& [name, def] : require_table(node, "functions")) {
            const auto where = "functions." + std::string(name.str());
            job.functions.emplace(std::string(name.str()), read_function(require_table(&def, where), where));
        }
    }
    const auto* tasks = root.get("tasks");
    if (!tasks) throw SchemaError("tasks", "a job needs at least one [[tasks]] entry");
    const auto* arr = tasks->as_array();
    if (!arr || arr->empty()) throw SchemaError("tasks", "expected a non-empty array of tables");
    for (std::size_t k = 0; k < arr->size(); ++k) {
        const auto where = "tasks[" + std::to_string(k) + "]";
        job.tasks.push_back(read_task(require_table(&(*arr)[k], where), k, job, opts));
    }
    return job;
}

// ---------------------------------------------------------------- execution

json render(const BiComplex& v) {
    return json{{"cartesian", format_cartesian(v)},
                {"idempotent", format_idempotent(v)},
                {"w1", {v.w1.real(), v.w1.imag()}},
                {"w2", {v.w2.real(), v.w2.imag()}}};
}

json render(const Hyperbolic& h) {
    json out = render(h.to_bicomplex());
    out["hyperbolic"] = format_hyperbolic(h);
    return out;
}

json pair(const Hyperbolic& h) { return json{h.v1, h.v2}; }

struct Status {
    bool converged = true;
    bool property_ok = true;
    bool error = false;
};

struct Outcome {
    json record;
    Status status;
};

void fill_integral(json& rec, Status& st, const IntegralResult& r) {
    rec["result"] = render(r.value);
    rec["est_error"] = pair(r.est_error);
    rec["converged"] = r.converged;
    rec["method"] = std::string(to_string(r.method));
    rec["levels_used"] = r.levels_used;
    st.converged = r.converged;
}

double worst_gap(const BiComplex& a, const BiComplex& b) {
    const auto d = d_modulus(a - b);
    return std::max(d.v1, d.v2);
}

void execute(const Job& job, const TaskDef& task, json& rec, Status& st) {
    const PathDef* path = task.path.empty() ? nullptr : &job.paths.at(task.path);
    const FunctionDef* fn = task.function.empty() ? nullptr : &job.functions.at(task.function);
    const auto cfg = task.settings.config();

    if (task.type == "variation") {
        VariationOptions vo;
        vo.tol = std::min(cfg.tol.v1, cfg.tol.v2);
        vo.max_levels = std::min(cfg.max_levels, VariationOptions{}.max_levels);
        vo.min_levels = cfg.min_levels;
        const auto r = total_variation(path->path, vo);
        rec["result"] = render(r.total);
        rec["est_error"] = pair(r.est_error);
        rec["converged"] = r.converged;
        rec["method"] = "DyadicVariation";
        rec["levels_used"] = r.levels;
        st.converged = r.converged;
        return;
    }
    if (task.type == "length") {
        const auto len = path_length_smooth(path->path);
        rec["result"] = render(len);
        rec["est_error"] = nullptr;
        rec["converged"] = true;
        rec["method"] = std::string(to_string(Method::SmoothReduction));
        rec["levels_used"] = 0;
        return;
    }
    if (task.type == "integrate") {
        fill_integral(rec, st,
                      task.method == "componentwise" ? rs_integral_componentwise(fn->f, path->path, cfg)
                                                     : rs_integral(fn->f, path->path, cfg));
        return;
    }
    if (task.type == "line-integral") {
        if (task.method == "smooth") {
            fill_integral(rec, st, line_integral_smooth(fn->f, path->path));
        } else if (task.method == "componentwise") {
            fill_integral(rec, st, line_integral_componentwise(fn->f, path->path, cfg));
        } else {
            fill_integral(rec, st, line_integral(fn->f, path->path, cfg));
        }
        return;
    }
    if (task.type == "arclength-integral") {
        fill_integral(rec, st, line_integral_arclength(fn->f, path->path, cfg));
        return;
    }
    if (task.type == "ftc-check") {
        const auto value = ftc_eval(*fn->primitive, path->path, fn->f);
        const auto line = line_integral(fn->f, path->path, cfg);
        fill_integral(rec, st, line);
        rec["result"] = render(value);
        rec["line_integral"] = render(line.value);
        const double residual = worst_gap(value, line.value);
        rec["residual"] = residual;
        rec["threshold"] = task.threshold;
        rec["passed"] = residual < task.threshold;
        st.property_ok = residual < task.threshold;
        return;
    }
    if (task.type == "ml-bound") {
        const auto bound = ml_bound(fn->f, path->path, task.samples);
        const auto line = line_integral(fn->f, path->path, cfg);
        fill_integral(rec, st, line);
        rec["result"] = render(bound);
        rec["method"] = "MLBound";
        rec["line_integral"] = render(line.value);
        const auto mod = d_modulus(line.value);
        const bool holds = mod.v1 <= bound.v1 + 1e-7 && mod.v2 <= bound.v2 + 1e-7;
        rec["holds"] = holds;
        st.property_ok = holds;
        return;
    }
    if (task.type == "props-check") {
        const auto report = props::run_suite(task.suite, task.seed, task.instances);
        rec["result"] = nullptr;
        rec["est_error"] = nullptr;
        rec["converged"] = true;
        rec["method"] = "PropertySuite";
        rec["levels_used"] = 0;
        json list = json::array();
        for (const auto& o : report.outcomes) {
            json item{{"property", o.property},
                      {"passed", o.passed},
                      {"instances", o.instances},
                      {"worst", o.worst},
                      {"threshold", o.threshold}};
            if (!o.passed) {
                item["detail"] = o.detail;
                item["counterexample"] = o.counterexample ? json(*o.counterexample) : json(nullptr);
            }
            list.push_back(item);
        }
        rec["passed"] = report.passed();
        rec["properties"] = list;
        st.property_ok = report.passed();
        return;
    }
}

Outcome run_task(const Job& job, const TaskDef& task) {
    Outcome out;
    auto& rec = out.record;
    rec["index"] = task.index;
    rec["id"] = task.id;
    rec["type"] = task.type;
    json inputs = json::object();
    if (!task.path.empty()) inputs["path"] = json{{"name", task.path}, {"definition", job.paths.at(task.path).echo}};
    if (!task.function.empty()) {
        inputs["function"] = json{{"name", task.function}, {"definition", job.functions.at(task.function).echo}};
    }
    if (task.type == "props-check") {
        inputs["suite"] = task.suite;
        inputs["seed"] = task.seed;
        inputs["instances"] = task.instances == 0 ? props::default_instances(task.suite) : task.instances;
    } else {
        inputs["config"] = task.settings.echo();
    }
    if (task.type == "integrate" || task.type == "line-integral") inputs["method"] = task.method;
    if (task.type == "ml-bound") inputs["samples"] = task.samples;
    rec["inputs"] = inputs;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        execute(job, task, rec, out.status);
        rec["error"] = nullptr;
    } catch (const Error& err) {
        out.status = {false, false, true};
        for (const char* key : {"result", "est_error", "method"}) rec[key] = nullptr;
        rec["converged"] = false;
        rec["levels_used"] = 0;
        rec["error"] = json{{"code", std::string(to_string(err.code()))}, {"message", err.what()}};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec["wall_time_ms"] = std::round(ms * 1000.0) / 1000.0;
    return out;
}

} // namespace

SchemaError::SchemaError(std::string key_path, const std::string& what)
    : Error(Errc::Schema, key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}

std::optional<double> tolerance_from_env() {
    const char* raw = std::getenv("HYPERCURVE_TOL");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !std::isfinite(v) || !(v > 0.0)) {
        throw SchemaError("HYPERCURVE_TOL", "expected a positive number, got '" + std::string(raw) + "'");
    }
    return v;
}

RunResult run_job_text(std::string_view toml_text, const RunOptions& opts) {
    toml::table root;
    try {
        root = toml::parse(toml_text, opts.source_name);
    } catch (const toml::parse_error& err) {
        const auto& pos = err.source().begin;
        throw SchemaError("line " + std::to_string(pos.line) + ", column " + std::to_string(pos.column),
                          std::string(err.description()));
    }
    const Job job = read_job(root, opts);

    std::vector<Outcome> outcomes(job.tasks.size());
    if (opts.parallel) {
        std::vector<std::future<Outcome>> pending;
        pending.reserve(job.tasks.size());
        for (const auto& task : job.tasks) {
            pending.push_back(std::async(std::launch::async, [&job, &task] { return run_task(job, task); }));
        }
        for (std::size_t k = 0; k < pending.size(); ++k) outcomes[k] = pending[k].get();
    } else {
        for (std::size_t k = 0; k < job.tasks.size(); ++k) outcomes[k] = run_task(job, job.tasks[k]);
    }

    int not_converged = 0;
    int property_failures = 0;
    int errors = 0;
    int ok = 0;
    json tasks = json::array();
    for (auto& o : outcomes) {
        if (o.status.error) {
            ++errors;
        } else {
            not_converged += o.status.converged ? 0 : 1;
            property_failures += o.status.property_ok ? 0 : 1;
            ok += o.status.converged && o.status.property_ok ? 1 : 0;
        }
        tasks.push_back(std::move(o.record));
    }
    RunResult result;
    result.exit_code = errors > 0 ? kExitInput : (not_converged + property_failures > 0 ? kExitFailed : kExitOk);

    json report;
    report["job"] = opts.source_name;
    report["seed"] = job.seed;
    report["config"] = job.defaults.echo();
    report["tasks"] = std::move(tasks);
    report["summary"] = json{{"tasks", job.tasks.size()},
                             {"ok", ok},
                             {"not_converged", not_converged},
                             {"property_failures", property_failures},
                             {"errors", errors},
                             {"exit_code", result.exit_code}};
    result.report = report.dump(2) + "\n";
    return result;
}

RunResult run_job_file(const std::filesystem::path& file, RunOptions opts) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw SchemaError(file.string(), "cannot open job file");
    std::ostringstream text;
    text << in.rdbuf();
    if (opts.source_name.empty()) opts.source_name = file.string();
    return run_job_text(text.str(), opts);
}

} // namespace hypercurve::job
