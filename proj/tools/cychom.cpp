#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cychom/io.hpp"
#include "cychom/report.hpp"

namespace {

constexpr int kUsageError = 1;

struct Shared {
    std::string file;
    int window = 6;
    std::string component;
    std::string format = "table";
    std::string out;
    std::string partner;
};

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int run(const std::string& command, const Shared& s) {
    const cychom::GroupoidDocument doc = cychom::load_groupoid(s.file);
    cychom::CommandOptions opts;
    opts.window = s.window;
    if (!s.component.empty()) opts.component = s.component;
    if (!s.partner.empty()) opts.partner = cychom::load_groupoid(s.partner);
    const cychom::Report r = cychom::run_command(command, doc, opts, s.file);
    write_output(s.format == "json" ? cychom::render_json(r) : cychom::render_table(r), s.out);
    return r.exit_status();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hochschild, cyclic and periodic homology of finite groupoid crossed products"};
    app.require_subcommand(1);
    Shared s;

    std::string selected;
    for (const std::string& name : cychom::command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("file", s.file, "groupoid document")->required()->check(CLI::ExistingFile);
        sub->add_option("--degree-window,-D", s.window, "number of degrees to compute")->check(CLI::Range(1, 64));
        sub->add_option("--format", s.format)->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--out,-o", s.out, "write the report here instead of stdout");
        if (name != "decompose" && name != "redcross-check")
            sub->add_option("--component", s.component, "restrict to the conjugation class of this loop");
        if (name == "ez-check" || name == "verify")
            sub->add_option("--with", s.partner, "second factor for the Eilenberg-Zilber check")->check(CLI::ExistingFile);
        sub->callback([&selected, name] { selected = name; });
    }

    // Round trip through the explicit form.
    CLI::App* emit = app.add_subcommand("emit", "print the explicit form of a document");
    emit->add_option("file", s.file)->required()->check(CLI::ExistingFile);
    emit->add_option("--out,-o", s.out);
    emit->callback([&selected] { selected = "emit"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsageError;
    }

    try {
        if (selected == "emit") {
            write_output(cychom::emit_groupoid(cychom::load_groupoid(s.file)), s.out);
            return 0;
        }
        return run(selected, s);
    } catch (const cychom::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
