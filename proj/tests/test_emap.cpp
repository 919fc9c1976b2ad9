#include <doctest.h>

#include "quadforge/catalog.hpp"
#include "quadforge/emap_io.hpp"
#include "quadforge/error.hpp"
#include "support.hpp"

using namespace quadforge;

namespace {

// K_{1,2} path 1-0-2 with a negative edge, written with scrambled ids.
const char* kPath =
    "emap 1\n"
    "V 3\n"
    "E 2\n"
    "e 7 0 2 -\n"
    "e 3 1 0 +\n"
    "r 2 : 7\n"
    "r 0 : 7 3\n"
    "r 1 : 3\n";

int format_error_line(const std::string& text, std::string* message = nullptr) {
    try {
        parse_emap(text);
    } catch (const FormatError& e) {
        if (message) *message = e.what();
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_SUITE("emap") {
    TEST_CASE("reader renumbers edges canonically") {
        const auto e = parse_emap(kPath);
        CHECK(e.graph().edges() == std::vector<VertexPair>{{0, 1}, {0, 2}});
        CHECK(e.sign(0) == 1);
        CHECK(e.sign(1) == -1);
        CHECK(write_emap(e) ==
              "emap 1\nV 3\nE 2\ne 0 0 1 +\ne 1 0 2 -\nr 0 : 0 1\nr 1 : 0\nr 2 : 1\n");
    }

    TEST_CASE("round trip of every stored witness") {
        Catalog catalog(qf_test::source_catalog(), false);
        for (const auto& r : record_table()) {
            const auto text = read_text_file(catalog.directory() / (r.name + ".emap"));
            const auto e = parse_emap(text);
            CHECK(write_emap(e) == text);
            CHECK(parse_emap(write_emap(e)) == e);
        }
    }

    TEST_CASE("header errors") {
        CHECK(format_error_line("emap 2\nV 0\nE 0\n") == 1);
        CHECK(format_error_line("quad 1\n") == 1);
        CHECK(format_error_line("emap 1\nV x\nE 0\n") == 2);
        CHECK(format_error_line("emap 1\nV 1\n") > 0);
    }

    TEST_CASE("edge line errors carry their line number") {
        std::string msg;
        CHECK(format_error_line("emap 1\nV 2\nE 1\ne 0 0 1 *\nr 0 : 0\nr 1 : 0\n", &msg) == 4);
        CHECK(msg.find("sign") != std::string::npos);
        CHECK(format_error_line("emap 1\nV 3\nE 2\ne 0 0 1 +\ne 0 0 2 +\nr 0 : 0 0\n", &msg) == 5);
        CHECK(msg.find("duplicate edge id 0") != std::string::npos);
        CHECK(format_error_line("emap 1\nV 2\nE 1\ne 0 1 1 +\n") == 4);
    }

    TEST_CASE("rotation inconsistencies name the vertex") {
        std::string msg;
        // Edge 1 = {0,2} is listed at vertex 2 but missing from the rotation of 0.
        const std::string omit = "emap 1\nV 3\nE 2\ne 0 0 1 +\ne 1 0 2 +\nr 0 : 0\nr 1 : 0\nr 2 : 1\n";
        CHECK(format_error_line(omit, &msg) > 0);
        CHECK(msg.find("vertex 0") != std::string::npos);
        CHECK(format_error_line("emap 1\nV 2\nE 1\ne 0 0 1 +\nr 0 : 5\nr 1 : 0\n", &msg) == 5);
        CHECK(msg.find("vertex 0") != std::string::npos);
        CHECK(format_error_line("emap 1\nV 2\nE 1\ne 0 0 1 +\nr 0 : 0\nr 0 : 0\n", &msg) == 6);
    }

    TEST_CASE("file helpers") {
        qf_test::TempDir dir("emap");
        const auto e = parse_emap(kPath);
        const auto path = dir.path() / "p.emap";
        write_emap_file(path, e);
        CHECK(read_emap_file(path) == e);
        CHECK_THROWS_AS(read_emap_file(dir.path() / "missing.emap"), FormatError);
        write_text_file_atomic(path, "emap 1\nV 1\nE 0\nr 0 :\nbogus\n");
        try {
            read_emap_file(path);
            FAIL("expected a format error");
        } catch (const FormatError& ex) {
            CHECK(ex.line() == 5);
            CHECK(std::string(ex.what()).find("p.emap") != std::string::npos);
        }
    }
}
