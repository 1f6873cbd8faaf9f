#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "imgcx/codec.hpp"
#include "imgcx/errors.hpp"

using namespace imgcx;
using namespace imgcx::codec;

TEST_CASE("lzw empty payload is CLEAR + EOI") {
    const auto out = lzw_compress({});
    // 256 and 257 as two 9-bit codes, MSB first: 100000000 100000001 + 6 pad bits.
    REQUIRE(out.size() == 3);
    CHECK(out[0] == 0x80);
    CHECK(out[1] == 0x40);
    CHECK(out[2] == 0x40);
    CHECK(lzw_decompress(out).empty());
}

TEST_CASE("lzw hand-traced stream") {
    // "ABAB": codes CLEAR, 'A', 'B', 258("AB"), EOI, all 9 bits wide.
    const std::vector<std::uint8_t> in = {'A', 'B', 'A', 'B'};
    const auto out = lzw_compress(in);
    CHECK(out.size() == 6);  // 5 codes * 9 bits = 45 bits
    std::uint64_t bits = 0;
    for (auto b : out) bits = (bits << 8) | b;
    bits >>= 3;
    CHECK(((bits >> 36) & 0x1FF) == 256);
    CHECK(((bits >> 27) & 0x1FF) == 'A');
    CHECK(((bits >> 18) & 0x1FF) == 'B');
    CHECK(((bits >> 9) & 0x1FF) == 258);
    CHECK((bits & 0x1FF) == 257);
}

TEST_CASE("lzw run-length degenerate case") {
    const std::vector<std::uint8_t> same(10000, 42);
    const auto out = lzw_compress(same);
    CHECK(out.size() < 500);  // < 5% of the input
    CHECK(lzw_decompress(out) == same);
}

TEST_CASE("lzw round trip over random payloads") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::uint8_t> p(rng() % 6000);
        const unsigned alphabet = 1 + static_cast<unsigned>(rng() % 256);
        for (auto& b : p) b = static_cast<std::uint8_t>(rng() % alphabet);
        CHECK(lzw_decompress(lzw_compress(p)) == p);
    }
    // Long enough to cycle the dictionary many times.
    std::vector<std::uint8_t> big(400000);
    for (auto& b : big) b = static_cast<std::uint8_t>(rng() % 5);
    CHECK(lzw_decompress(lzw_compress(big)) == big);
}

TEST_CASE("lzw rejects malformed streams") {
    CHECK_THROWS_AS(lzw_decompress(std::vector<std::uint8_t>{}), InvalidInput);
    CHECK_THROWS_AS(lzw_decompress(std::vector<std::uint8_t>{0x00, 0x00, 0x00}), InvalidInput);
    auto good = lzw_compress(std::vector<std::uint8_t>(50, 7));
    good.resize(good.size() - 2);
    CHECK_THROWS_AS(lzw_decompress(good), InvalidInput);
}

TEST_CASE("quantization table mapping") {
    const auto q75 = quantization_table({0.75});
    CHECK(q75[0] == 8);   // round(16 * 50 / 100)
    CHECK(q75[1] == 6);   // round(11 * 0.5) = round(5.5)
    CHECK(q75[63] == 50); // round(99 * 0.5) = round(49.5)
    const auto q50 = quantization_table({0.5});
    CHECK(q50[0] == 16);
    const auto q100 = quantization_table({1.0});
    for (int v : q100) CHECK(v == 1);
    const auto q1 = quantization_table({0.01});
    for (int v : q1) CHECK(v == 255);
    CHECK(LossyCodecParams{0.001}.scaled_quality() == 1);
    CHECK_THROWS_AS(quantization_table({0.0}), InvalidParameter);
    CHECK_THROWS_AS(quantization_table({1.5}), InvalidParameter);
}

TEST_CASE("lossy codec on constant images") {
    for (std::uint8_t level : {0, 77, 128, 255}) {
        const auto img = GrayImage::from_bytes(40, 24, std::vector<std::uint8_t>(40 * 24, level));
        const auto enc = lossy_encode(img, {0.75});
        CHECK(rms_error(img, enc.reconstruction) <= 1.0 / 255.0);
        // DC-only blocks: one DC code and a 1-bit end-of-block each.
        CHECK(enc.encoded_size <= 15 * 3);  // 15 blocks, at most 18 bits each
    }
}

TEST_CASE("lossy codec: noise costs more than a smooth gradient") {
    const auto noise = testing::noise_image(64, 64, 1);
    const auto smooth = testing::gradient_image(64, 64);
    const auto n = lossy_encode(noise, {0.75});
    const auto s = lossy_encode(smooth, {0.75});
    CHECK(n.encoded_size > s.encoded_size);
    CHECK(rms_error(noise, n.reconstruction) > rms_error(smooth, s.reconstruction));
}

TEST_CASE("lossy codec monotonicity in quality") {
    std::mt19937_64 rng(77);
    for (int f = 0; f < 6; ++f) {
        const auto img = testing::random_image(rng, 20 + rng() % 50, 20 + rng() % 50);
        std::size_t prev_size = 0;
        double prev_rms = 1.0;
        for (int q = 1; q <= 100; ++q) {
            const auto enc = lossy_encode(img, {q / 100.0});
            CHECK(enc.encoded_size >= prev_size);
            const double rms = rms_error(img, enc.reconstruction);
            // Scalar quantization error can wobble slightly between adjacent steps.
            CHECK(rms <= prev_rms * 1.02 + 1e-12);
            prev_size = enc.encoded_size;
            prev_rms = rms;
        }
        double coarse = 1.0;
        for (double q : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const double rms = rms_error(img, lossy_encode(img, {q}).reconstruction);
            CHECK(rms <= coarse);
            coarse = rms;
        }
    }
}

TEST_CASE("lossy codec: edge blocks and reconstruction size") {
    const auto img = testing::gradient_image(13, 9);
    const auto enc = lossy_encode(img, {0.9});
    CHECK(enc.reconstruction.width() == 13);
    CHECK(enc.reconstruction.height() == 9);
    CHECK(rms_error(img, enc.reconstruction) < 0.02);
    // Reconstructions are 8-bit levels, so a PNG round trip preserves them.
    for (double v : enc.reconstruction.pixels()) CHECK(v * 255.0 == doctest::Approx(std::round(v * 255.0)));
}

TEST_CASE("codecs are deterministic") {
    const auto img = testing::noise_image(33, 17, 5);
    const auto a = lossy_encode(img, {0.6});
    const auto b = lossy_encode(img, {0.6});
    CHECK(a.stream == b.stream);
    CHECK(a.reconstruction == b.reconstruction);
    const auto bytes = img.to_bytes();
    CHECK(lzw_compress(bytes) == lzw_compress(bytes));
    CHECK_THROWS_AS(rms_error(GrayImage(2, 2, 0.0), GrayImage(3, 2, 0.0)), InvalidInput);
}
