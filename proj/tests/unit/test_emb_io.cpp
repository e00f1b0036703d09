// SPDX-License-Identifier: Apache-2.0
#include <cstring>
#include <fstream>

#include "doctest.h"
#include "faceset/emb_io.hpp"
#include "faceset/error.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace faceset;
using namespace faceset::ingest;

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::uint32_t float_bits(double v) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    return bits;
}

// Builds an EMB1 file by hand, independent of the writer.
std::vector<std::uint8_t> handmade(std::uint32_t n, std::uint32_t d, std::uint8_t kind, const std::vector<float>& values,
                                   const std::string& meta) {
    std::vector<std::uint8_t> out{'E', 'M', 'B', '1'};
    auto put32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put32(1);
    put32(n);
    put32(d);
    out.push_back(0);
    out.push_back(kind);
    out.push_back(0);
    out.push_back(0);
    for (float f : values) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put32(bits);
    }
    put32(static_cast<std::uint32_t>(meta.size()));
    out.insert(out.end(), meta.begin(), meta.end());
    return out;
}

ErrorCode read_code(const std::filesystem::path& p) {
    try {
        read_matrix_file(p);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("EMB1: empty set round-trips") {
    support::TempDir dir("emb");
    EmbeddingSet empty;
    empty.matrix.resize(0, 0);
    write_embeddings(empty, dir / "e.emb");
    const auto back = read_embeddings(dir / "e.emb");
    CHECK(back.rows() == 0);
    CHECK(back.ids.empty());
}

TEST_CASE("EMB1: 2x3 floats round-trip bit-exactly and match the byte layout") {
    support::TempDir dir("emb");
    RowMatrix m(2, 3);
    m << 0.1f, -2.5f, 3.0e-8f, 1.0f / 3.0f, 65504.0f, -0.0f;
    EmbeddingSet set = EmbeddingSet::from_rows({"a", "b"}, m, false);
    write_embeddings(set, dir / "m.emb");

    const auto bytes = slurp(dir / "m.emb");
    const std::string meta = R"({"face_found":[true,true],"ids":["a","b"]})";
    std::vector<float> values;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c) values.push_back(static_cast<float>(m(r, c)));
    CHECK(bytes == handmade(2, 3, 0, values, meta));

    const auto back = read_embeddings(dir / "m.emb");
    REQUIRE(back.rows() == 2);
    REQUIRE(back.dim() == 3);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c) CHECK(float_bits(back.matrix(r, c)) == float_bits(m(r, c)));
    CHECK(back.ids == set.ids);
    CHECK_FALSE(back.normalized);
}

TEST_CASE("EMB1: random float payloads round-trip (property)") {
    support::TempDir dir("emb");
    support::Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) * 7;
        RowMatrix m = support::gaussian_rows(rng, n, 1 + static_cast<std::size_t>(trial), 100.0);
        m = m.cast<float>().cast<double>();
        EmbeddingSet set = support::make_set(m, trial % 2 == 0);
        if (n > 2) {
            set.matrix.row(1).setZero();
            set.face_found[1] = false;
        }
        write_embeddings(set, dir / "p.emb");
        const auto back = read_embeddings(dir / "p.emb");
        CHECK(back.matrix == set.matrix);
        CHECK(back.face_found == set.face_found);
        CHECK(back.normalized == set.normalized);
        write_embeddings(back, dir / "q.emb");
        CHECK(slurp(dir / "p.emb") == slurp(dir / "q.emb"));
    }
}

TEST_CASE("EMB1: probabilities use kind 1 and are checked on typed reads") {
    support::TempDir dir("emb");
    ClassProbabilitySet probs{{"x", "y"}, RowMatrix::Constant(2, 4, 0.25)};
    write_embeddings(probs, dir / "p.emb");
    CHECK(slurp(dir / "p.emb")[17] == 1);
    const auto back = read_probabilities(dir / "p.emb");
    CHECK(back.matrix == probs.matrix);
    CHECK(back.ids == probs.ids);
    try {
        read_embeddings(dir / "p.emb");
        FAIL("expected FormatError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FormatError);
    }
    CHECK(std::holds_alternative<ClassProbabilitySet>(read_matrix_file(dir / "p.emb")));
}

TEST_CASE("EMB1: header and metadata validation") {
    support::TempDir dir("emb");
    const std::vector<float> five(5 * 1, 0.5f);
    dump(dir / "count.emb", handmade(5, 1, 0, five, R"({"ids":["a","b","c","d"],"face_found":[true,true,true,true]})"));
    CHECK(read_code(dir / "count.emb") == ErrorCode::FormatError);

    const std::vector<float> two(2, 0.5f);
    dump(dir / "json.emb", handmade(2, 1, 0, two, R"({"ids":["a","b"],)"));
    CHECK(read_code(dir / "json.emb") == ErrorCode::FormatError);

    dump(dir / "kind.emb", handmade(2, 1, 7, two, R"({"ids":["a","b"]})"));
    CHECK(read_code(dir / "kind.emb") == ErrorCode::FormatError);

    auto bytes = handmade(2, 1, 0, two, R"({"ids":["a","b"]})");
    bytes[0] = 'X';
    dump(dir / "magic.emb", bytes);
    CHECK(read_code(dir / "magic.emb") == ErrorCode::FormatError);

    bytes = handmade(2, 1, 0, two, R"({"ids":["a","b"]})");
    bytes[4] = 9;
    dump(dir / "version.emb", bytes);
    CHECK(read_code(dir / "version.emb") == ErrorCode::FormatError);

    dump(dir / "dup.emb", handmade(2, 1, 0, two, R"({"ids":["a","a"]})"));
    CHECK(read_code(dir / "dup.emb") == ErrorCode::FormatError);

    dump(dir / "placeholder.emb", handmade(2, 1, 0, two, R"({"ids":["a","b"],"face_found":[true,false]})"));
    CHECK(read_code(dir / "placeholder.emb") == ErrorCode::FormatError);

    bytes = handmade(2, 1, 0, two, R"({"ids":["a","b"]})");
    bytes.resize(bytes.size() - 3);
    dump(dir / "short.emb", bytes);
    CHECK(read_code(dir / "short.emb") == ErrorCode::FormatError);

    // face_found may be omitted; every row is then valid.
    dump(dir / "nofaces.emb", handmade(2, 1, 0, two, R"({"ids":["a","b"]})"));
    CHECK(read_embeddings(dir / "nofaces.emb").valid_count() == 2);

    CHECK(read_code(dir / "missing.emb") == ErrorCode::IoError);
}
