// Exercises the installed CLI binary end to end.  The binary path arrives
// as argv[1] from CTest.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

struct RunResult {
    int exit_code;
    std::string output;
};

std::string binary;

RunResult run(const std::string& args) {
    std::string cmd = binary + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        std::cerr << "failed to spawn: " << cmd << '\n';
        std::exit(2);
    }
    std::string output;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

void expect(bool ok, const std::string& what, const RunResult& r) {
    if (ok) return;
    ++failures;
    std::cerr << "FAILED: " << what << "\n  exit=" << r.exit_code << "\n  output:\n"
              << r.output << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-modchar>\n";
        return 2;
    }
    binary = argv[1];
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "modchar_cli_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    {
        RunResult r = run("parse \"~(<>p)\" --props p");
        expect(r.exit_code == 0 && r.output == "[]~p\n", "parse pushes negation inward", r);
    }
    {
        RunResult r = run("parse \"p & (\" --props p");
        expect(r.exit_code == 65, "parse error exits 65", r);
    }
    {
        RunResult r = run("parse");
        expect(r.exit_code == 64, "missing argument exits 64", r);
    }
    {
        RunResult r = run("nf \"<>(p | q)\" --props p,q");
        expect(r.exit_code == 0 && r.output == "<>p\n<>q\n", "nf distributes the diamond", r);
    }
    {
        RunResult r = run("tower --max-n 2");
        expect(r.exit_code == 0 &&
                   r.output == "n=1  constructed=2  tower(n,2)=2\n"
                               "n=2  constructed=4  tower(n,2)=4\n",
               "tower table rows", r);
    }
    {
        RunResult r = run("tower --max-n 4");
        expect(r.exit_code == 64, "deep tower rows need the explicit flag", r);
    }

    // characterize writes a directory of example files.
    fs::path char_dir = tmp / "char_p";
    {
        RunResult r = run("characterize \"p\" --props p --out " + char_dir.string() + " --dot");
        expect(r.exit_code == 0, "characterize runs", r);
        expect(fs::exists(char_dir / "pos" / "000.json") &&
                   fs::exists(char_dir / "neg" / "000.json") &&
                   fs::exists(char_dir / "pos" / "000.dot") &&
                   fs::exists(char_dir / "formula.txt") && fs::exists(char_dir / "summary.txt"),
               "characterize writes the example directory", r);
        expect(!fs::exists(char_dir / "pos" / "001.json") &&
                   !fs::exists(char_dir / "neg" / "001.json"),
               "characterize of an atom emits one example per side", r);
    }
    {
        RunResult r = run("fits \"p\" --props p --pos " + (char_dir / "pos" / "000.json").string() +
                          " --neg " + (char_dir / "neg" / "000.json").string());
        expect(r.exit_code == 0 && r.output == "fits\n", "fits accepts its own examples", r);
    }
    {
        RunResult r = run("fits \"p\" --props p --pos " +
                          (char_dir / "neg" / "000.json").string());
        expect(r.exit_code == 1, "fit failure exits 1", r);
    }

    // Loopstate facts through the wsim verb.
    fs::path empty_loop = tmp / "empty_loop.json";
    {
        std::ofstream out(empty_loop);
        out << R"({"signature":["p"],"states":[{"id":"s0","props":[]}],)"
            << R"("edges":[["s0","s0"]],"point":"s0"})";
    }
    {
        RunResult r = run("wsim " + empty_loop.string() + " " +
                          (char_dir / "pos" / "000.json").string() + " --witness");
        expect(r.exit_code == 0 && r.output.find("true") == 0 &&
                   r.output.find("\"pairs\"") != std::string::npos,
               "the empty loopstate maps into any model", r);
    }
    {
        RunResult r = run("modelcheck \"<>true\" " + empty_loop.string());
        expect(r.exit_code == 0 && r.output == "true\n", "modelcheck verb", r);
    }
    {
        RunResult r = run("height " + empty_loop.string());
        expect(r.exit_code == 0 && r.output == "infinity\n", "height of the loopstate", r);
    }
    {
        RunResult r = run("unravel " + empty_loop.string() + " -n 2");
        expect(r.exit_code == 0 && r.output.find("\"n2\"") != std::string::npos,
               "unravelling emits the path", r);
    }
    {
        RunResult r = run("bisim " + empty_loop.string() + " " + empty_loop.string());
        expect(r.exit_code == 0 && r.output == "true\n", "bisim verb", r);
    }

    // Verification verbs with tiny bounds.
    {
        RunResult r = run("verify unique \"<>p\" --props p --max-size 5 --jobs 2");
        expect(r.exit_code == 0 && r.output.find("pass") != std::string::npos,
               "verify unique passes", r);
    }
    {
        RunResult r = run("verify duality \"p\" --props p --samples 50 --format json");
        expect(r.exit_code == 0 && r.output.find("\"verdict\": \"pass\"") != std::string::npos,
               "verify duality passes with json output", r);
    }
    {
        RunResult r = run("verify preservation --props p,q --samples 100 --jobs 2");
        expect(r.exit_code == 0, "verify preservation passes", r);
    }
    {
        RunResult r = run("spoiler \"false\" --props p --neg " +
                          (char_dir / "neg" / "000.json").string());
        expect(r.exit_code == 0 && r.output.find("spoiler:") == 0,
               "spoiler produces a fitting non-equivalent formula", r);
    }
    {
        RunResult r = run("fixtures coproduct --out " + (tmp / "fixtures").string());
        expect(r.exit_code == 0 && fs::exists(tmp / "fixtures" / "C_prime.json"),
               "fixtures coproduct writes four models", r);
    }
    {
        RunResult r = run("characterize \"true\" --props p --out " + (tmp / "top").string());
        expect(r.exit_code == 0 && fs::exists(tmp / "top" / "pos" / "000.json") &&
                   !fs::exists(tmp / "top" / "neg" / "000.json"),
               "the truth constant gets its single-example characterisation", r);
    }

    if (failures == 0) std::cout << "cli_tests: all checks passed\n";
    return failures == 0 ? 0 : 1;
}
