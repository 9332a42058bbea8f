#include "msadl_cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "msadl/checker.hpp"
#include "msadl/docs.hpp"
#include "msadl/entity.hpp"
#include "msadl/interchange.hpp"
#include "msadl/parser.hpp"
#include "msadl/printer.hpp"
#include "msadl/simulator.hpp"
#include "msadl/transform.hpp"

namespace msadl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    std::ostream& out;
    std::ostream& err;
    bool json = false;
    bool color = false;
};

bool color_from_env() {
    const char* v = std::getenv("MSADL_COLOR");
    return v && std::string_view(v) == "1";
}

std::string diagnostic_line(const Diagnostic& d, bool color) {
    std::string text = format_diagnostic(d);
    if (!color) return text;
    std::string sev(to_string(d.severity));
    auto pos = text.find(sev + "[");
    if (pos == std::string::npos) return text;
    const char* code = d.severity == Severity::Error ? "\x1b[31m" : d.severity == Severity::Warning ? "\x1b[33m" : "\x1b[36m";
    return text.substr(0, pos) + code + sev + "\x1b[0m" + text.substr(pos + sev.size());
}

json diagnostic_json(const Diagnostic& d) {
    json j = {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}};
    if (!d.location.file.empty()) j["file"] = d.location.file;
    if (d.location.line != 0) {
        j["line"] = d.location.line;
        j["column"] = d.location.column;
    }
    return j;
}

json diagnostics_json(const std::vector<Diagnostic>& diags) {
    json a = json::array();
    for (const auto& d : diags) a.push_back(diagnostic_json(d));
    return a;
}

void print_diagnostics(const Output& o, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) o.out << diagnostic_line(d, o.color) << '\n';
}

void print_json(const Output& o, const json& j) { o.out << j.dump(2) << '\n'; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DiagnosticError(make_error(codes::IoError, "cannot read '" + path + "'"));
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << content)) {
        throw DiagnosticError(make_error(codes::IoError, "cannot write '" + path.string() + "'"));
    }
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

struct Loaded {
    std::vector<SourceUnit> units;
    std::vector<Diagnostic> diagnostics;
    bool ok = true;
};

Loaded load_units(const std::vector<std::string>& paths) {
    Loaded l;
    for (const auto& path : paths) {
        std::string text;
        try {
            text = read_file(path);
        } catch (const DiagnosticError& e) {
            l.diagnostics.push_back(e.diagnostic());
            l.ok = false;
            continue;
        }
        if (is_json_path(path)) {
            try {
                l.units.push_back(from_interchange(json::parse(text), path));
            } catch (const json::exception& e) {
                l.diagnostics.push_back(make_error(codes::InterchangeInvalid, path + ": " + e.what()));
                l.ok = false;
            } catch (const DiagnosticError& e) {
                l.diagnostics.push_back(e.diagnostic());
                l.ok = false;
            }
            continue;
        }
        ParseResult r = parse_unit(text, view_from_path(path), path);
        l.diagnostics.insert(l.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
        if (!r.ok()) {
            l.ok = false;
            continue;
        }
        l.diagnostics.insert(l.diagnostics.end(), r.unit->notes.begin(), r.unit->notes.end());
        l.units.push_back(std::move(*r.unit));
    }
    return l;
}

// Loads, resolves and validates; diagnostics include parse notes.
struct Models {
    std::optional<ModelSet> set;
    std::vector<Diagnostic> diagnostics;
    bool valid() const { return set && !has_errors(diagnostics); }
};

Models load_models(const std::vector<std::string>& paths) {
    Models m;
    Loaded l = load_units(paths);
    m.diagnostics = std::move(l.diagnostics);
    if (!l.ok) {
        sort_diagnostics(m.diagnostics);
        return m;
    }
    m.set = resolve(std::move(l.units)).set;
    auto v = validate(*m.set);
    m.diagnostics.insert(m.diagnostics.end(), v.begin(), v.end());
    sort_diagnostics(m.diagnostics);
    return m;
}

// Prints load/validation failures and returns true when the models are unusable.
bool report_invalid(const Output& o, const Models& m) {
    if (m.valid()) return false;
    if (o.json) {
        print_json(o, {{"ok", false}, {"diagnostics", diagnostics_json(m.diagnostics)}});
    } else {
        print_diagnostics(o, m.diagnostics);
    }
    return true;
}

std::pair<std::size_t, const TypeDecl*> find_type(const ModelSet& set, const std::string& name) {
    for (std::size_t u = 0; u < set.size(); ++u) {
        for (const auto& t : set.unit(u).types) {
            if (t.name == name) return {u, &t};
        }
    }
    throw DiagnosticError(make_error(codes::RefUnresolved, "type '" + name + "' is not declared"));
}

ValueTree read_value(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') return parse_value_json(read_file(arg.substr(1)));
    return parse_value_json(arg);
}

// ----- subcommands ---------------------------------------------------------

int cmd_validate(const Output& o, const std::vector<std::string>& files) {
    Models m = load_models(files);
    bool ok = !has_errors(m.diagnostics);
    if (o.json) {
        print_json(o, {{"ok", ok}, {"diagnostics", diagnostics_json(m.diagnostics)}});
    } else {
        print_diagnostics(o, m.diagnostics);
    }
    return ok ? Success : Failure;
}

struct TransformArgs {
    std::string to;
    std::string in;
    std::string out;
    std::string lossReport;
    std::vector<std::string> context;
};

int cmd_transform(const Output& o, const TransformArgs& a) {
    std::vector<std::string> paths{a.in};
    for (const auto& c : a.context) {
        if (c != a.in) paths.push_back(c);
    }
    Models m = load_models(paths);
    if (report_invalid(o, m)) return Failure;
    View target = a.to == "jolie" ? View::Jolie : View::Lemma;
    UnitTransformResult r = transform_unit(*m.set, 0, target);
    r.unit.path = a.out;
    write_file(a.out, is_json_path(a.out) ? to_interchange(r.unit).dump(2) + "\n" : serialize(r.unit));
    if (!a.lossReport.empty()) {
        write_file(a.lossReport, is_json_path(a.lossReport) ? r.loss.to_json().dump(2) + "\n" : r.loss.render_table());
    }
    bool ok = !has_errors(r.diagnostics);
    if (o.json) {
        print_json(o, {{"ok", ok}, {"diagnostics", diagnostics_json(r.diagnostics)}, {"loss", r.loss.to_json()}});
    } else {
        print_diagnostics(o, r.diagnostics);
        o.out << r.loss.render_table();
    }
    return ok ? Success : Failure;
}

int cmd_check_value(const Output& o, const std::vector<std::string>& models, const std::string& type,
                    const std::string& value) {
    Models m = load_models(models);
    if (report_invalid(o, m)) return Failure;
    auto [unit, decl] = find_type(*m.set, type);
    CheckReport report = check_value(read_value(value), *decl, m.set->type_lookup(unit));
    if (o.json) {
        json v = json::array();
        for (const auto& x : report.violations) {
            v.push_back({{"path", x.path}, {"rule", to_string(x.rule)}, {"detail", x.detail}});
        }
        print_json(o, {{"ok", report.ok}, {"violations", v}});
    } else if (report.ok) {
        o.out << "ok\n";
    } else {
        for (const auto& x : report.violations) {
            o.out << (x.path.empty() ? "<root>" : x.path) << ": " << to_string(x.rule) << ": " << x.detail << '\n';
        }
    }
    return report.ok ? Success : Failure;
}

struct EntityArgs {
    std::vector<std::string> models;
    std::string type;
    std::string registry;
    std::string salt;
    std::string value;
    std::string value2;
};

std::vector<std::uint8_t> parse_salt(const std::string& hex) {
    if (hex.empty()) throw UsageError("--salt must be a non-empty hex string");
    try {
        return bytes_from_hex(hex);
    } catch (const DiagnosticError&) {
        throw UsageError("--salt must be a hex string");
    }
}

int cmd_entity_register(const Output& o, const EntityArgs& a) {
    auto salt = parse_salt(a.salt);
    Models m = load_models(a.models);
    if (report_invalid(o, m)) return Failure;
    auto [unit, decl] = find_type(*m.set, a.type);
    TypeLookup lookup = m.set->type_lookup(unit);
    EntityRegistry registry;
    if (fs::exists(a.registry)) {
        try {
            registry = EntityRegistry::from_json(json::parse(read_file(a.registry)));
        } catch (const json::exception& e) {
            throw DiagnosticError(make_error(codes::RegistryInvalid, a.registry + ": " + e.what()));
        }
    }
    std::vector<ValueTree> values{read_value(a.value)};
    if (!a.value2.empty()) values.push_back(read_value(a.value2));
    json results = json::array();
    bool conflict = false;
    std::vector<std::string> lines;
    for (const auto& v : values) {
        RegisterOutcome r = registry.register_entity(v, *decl, salt, lookup);
        if (const auto* added = std::get_if<RegisterAdded>(&r)) {
            results.push_back({{"outcome", "added"}, {"signature", to_hex(added->signature.digest)}});
            lines.push_back("added " + to_hex(added->signature.digest));
        } else if (const auto* same = std::get_if<RegisterUnchanged>(&r)) {
            results.push_back({{"outcome", "unchanged"}, {"signature", to_hex(same->signature.digest)}});
            lines.push_back("unchanged " + to_hex(same->signature.digest));
        } else {
            const auto& c = std::get<RegisterConflict>(r);
            conflict = true;
            results.push_back({{"outcome", "conflict"},
                               {"signature", to_hex(c.signature.digest)},
                               {"existingPayload", to_hex(c.existingPayload)},
                               {"incomingPayload", to_hex(c.incomingPayload)}});
            lines.push_back(format_diagnostic(make_error(
                codes::DddConflict, "Conflict: " + a.type + " " + to_hex(c.signature.digest) +
                                        " is already registered with a different payload")));
        }
    }
    write_file(a.registry, registry.to_json().dump(2) + "\n");
    if (o.json) {
        print_json(o, {{"ok", !conflict}, {"results", results}});
    } else {
        for (const auto& l : lines) o.out << l << '\n';
    }
    return conflict ? Failure : Success;
}

int cmd_entity_assert_equals(const Output& o, const EntityArgs& a) {
    if (a.value2.empty()) throw UsageError("assert-equals needs --value2");
    Models m = load_models(a.models);
    if (report_invalid(o, m)) return Failure;
    auto [unit, decl] = find_type(*m.set, a.type);
    bool equal = assert_equals(read_value(a.value), read_value(a.value2), *decl, m.set->type_lookup(unit));
    if (o.json) {
        print_json(o, {{"ok", true}, {"equal", equal}});
    } else {
        o.out << (equal ? "equal" : "not equal") << '\n';
    }
    return Success;
}

struct SimulateArgs {
    std::vector<std::string> models;
    std::uint64_t seed = 0;
    std::uint64_t maxSteps = 10000;
    std::string trace;
    std::vector<std::string> services;
};

int cmd_simulate(const Output& o, const SimulateArgs& a) {
    Models m = load_models(a.models);
    if (report_invalid(o, m)) return Failure;
    RunResult r = run(*m.set, Schedule{a.seed}, a.maxSteps, a.services);
    if (!a.trace.empty()) write_file(a.trace, trace_to_jsonl(r.trace));
    bool ok = r.outcome == RunOutcome::Terminated;
    if (o.json) {
        json trace = json::array();
        for (const auto& e : r.trace) trace.push_back(to_json(e));
        print_json(o, {{"ok", ok},
                       {"outcome", to_string(r.outcome)},
                       {"steps", r.trace.size()},
                       {"diagnostics", diagnostics_json(r.diagnostics)},
                       {"trace", trace}});
    } else {
        print_diagnostics(o, r.diagnostics);
        o.out << "outcome: " << to_string(r.outcome) << "\nsteps: " << r.trace.size() << '\n';
    }
    return ok ? Success : Failure;
}

int cmd_docs(const Output& o, const std::vector<std::string>& models, const std::string& outDir) {
    Models m = load_models(models);
    if (report_invalid(o, m)) return Failure;
    SkeletonBundle bundle = generate_docs(*m.set);
    json files = json::array();
    for (const auto& f : bundle.files) {
        write_file(fs::path(outDir) / f.path, f.content);
        files.push_back(f.path);
    }
    if (o.json) {
        print_json(o, {{"ok", true}, {"files", files}});
    } else {
        for (const auto& f : bundle.files) o.out << "wrote " << (fs::path(outDir) / f.path).generic_string() << '\n';
    }
    return Success;
}

int cmd_fmt(const Output& o, const std::vector<std::string>& files, bool check) {
    std::vector<Diagnostic> diags;
    json changed = json::array();
    bool failed = false;
    for (const auto& path : files) {
        Loaded l = load_units({path});
        if (!l.ok) {
            diags.insert(diags.end(), l.diagnostics.begin(), l.diagnostics.end());
            failed = true;
            continue;
        }
        const SourceUnit& unit = l.units.front();
        std::string formatted = is_json_path(path) ? to_interchange(unit).dump(2) + "\n" : serialize(unit);
        if (formatted == read_file(path)) continue;
        changed.push_back(path);
        if (check) {
            failed = true;
        } else {
            write_file(path, formatted);
        }
    }
    if (o.json) {
        print_json(o, {{"ok", !failed}, {check ? "unformatted" : "reformatted", changed}, {"diagnostics", diagnostics_json(diags)}});
    } else {
        print_diagnostics(o, diags);
        for (const auto& p : changed) o.out << (check ? "would reformat " : "reformatted ") << p.get<std::string>() << '\n';
    }
    return failed ? Failure : Success;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Microservice architecture model processors", "msadl"};
    app.require_subcommand(1);
    Output o{out, err, false, color_from_env()};
    std::function<int()> action;

    auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Machine-readable JSON on stdout"); };

    std::vector<std::string> validateFiles;
    auto* validate = app.add_subcommand("validate", "Parse, resolve and validate model files");
    validate->add_option("files", validateFiles, "Model files")->required();
    json_flag(validate);
    validate->callback([&] { action = [&] { return cmd_validate(o, validateFiles); }; });

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "Translate a unit between the Jolie and LEMMA views");
    transform->add_option("--to", ta.to, "Target view")->required()->check(CLI::IsMember({"jolie", "lemma"}));
    transform->add_option("--in", ta.in, "Input unit")->required();
    transform->add_option("--out", ta.out, "Output unit")->required();
    transform->add_option("--loss-report", ta.lossReport, "Loss report file (.json or text)");
    transform->add_option("--model", ta.context, "Additional units for name resolution");
    json_flag(transform);
    transform->callback([&] { action = [&] { return cmd_transform(o, ta); }; });

    std::vector<std::string> cvModels;
    std::string cvType, cvValue;
    auto* check = app.add_subcommand("check-value", "Check a JSON value against a declared type");
    check->add_option("--model", cvModels, "Model files")->required();
    check->add_option("--type", cvType, "Type name")->required();
    check->add_option("--value", cvValue, "Value as JSON, or @file")->required();
    json_flag(check);
    check->callback([&] { action = [&] { return cmd_check_value(o, cvModels, cvType, cvValue); }; });

    EntityArgs ea;
    auto* entity = app.add_subcommand("entity", "Entity identity registry");
    entity->require_subcommand(1);
    auto entity_options = [&](CLI::App* sub, bool registryRequired) {
        sub->add_option("--model", ea.models, "Model files")->required();
        sub->add_option("--type", ea.type, "Entity type name")->required();
        auto* reg = sub->add_option("--registry", ea.registry, "Registry file");
        if (registryRequired) reg->required();
        auto* salt = sub->add_option("--salt", ea.salt, "Salt as hex");
        if (registryRequired) salt->required();
        sub->add_option("--value", ea.value, "Value as JSON, or @file")->required();
        sub->add_option("--value2", ea.value2, "Second value as JSON, or @file");
        json_flag(sub);
    };
    auto* reg = entity->add_subcommand("register", "Register entity values");
    entity_options(reg, true);
    reg->callback([&] { action = [&] { return cmd_entity_register(o, ea); }; });
    auto* eq = entity->add_subcommand("assert-equals", "Compare two values by identity");
    entity_options(eq, false);
    eq->callback([&] { action = [&] { return cmd_entity_assert_equals(o, ea); }; });

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Run the Jolie services of a model");
    simulate->add_option("--model", sa.models, "Model files")->required();
    simulate->add_option("--seed", sa.seed, "Scheduler seed");
    simulate->add_option("--max-steps", sa.maxSteps, "Step bound");
    simulate->add_option("--trace", sa.trace, "Write the trace as JSON lines");
    simulate->add_option("--service", sa.services, "Restrict to these services");
    json_flag(simulate);
    simulate->callback([&] { action = [&] { return cmd_simulate(o, sa); }; });

    std::vector<std::string> docModels;
    std::string docOut;
    auto* docs = app.add_subcommand("docs", "Generate documentation pages and behaviour skeletons");
    docs->add_option("--model", docModels, "Model files")->required();
    docs->add_option("--out", docOut, "Output directory")->required();
    json_flag(docs);
    docs->callback([&] { action = [&] { return cmd_docs(o, docModels, docOut); }; });

    std::vector<std::string> fmtFiles;
    bool fmtCheck = false;
    auto* fmt = app.add_subcommand("fmt", "Rewrite model files in canonical form");
    fmt->add_option("files", fmtFiles, "Model files")->required();
    fmt->add_flag("--check", fmtCheck, "Report files that are not formatted instead of rewriting them");
    json_flag(fmt);
    fmt->callback([&] { action = [&] { return cmd_fmt(o, fmtFiles, fmtCheck); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Success : Usage;
    }
    if (!action) return Usage;
    try {
        return action();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return Usage;
    } catch (const DiagnosticError& e) {
        if (o.json) {
            print_json(o, {{"ok", false}, {"diagnostics", diagnostics_json({e.diagnostic()})}});
        } else {
            out << diagnostic_line(e.diagnostic(), o.color) << '\n';
        }
        return Failure;
    }
}

}  // namespace msadl::cli
