#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "imgcx/errors.hpp"
#include "imgcx/measures.hpp"

using namespace imgcx;

namespace {

double brute_entropy(const GrayImage& img) {
    std::map<long, double> counts;
    for (double v : img.pixels()) counts[std::lround(v * 255.0)] += 1.0;
    double s = 0.0;
    for (const auto& [level, c] : counts) {
        const double p = c / static_cast<double>(img.size());
        s -= p * std::log(p);
    }
    return s;
}

}  // namespace

TEST_CASE("entropy and energy") {
    CHECK(entropy(GrayImage(16, 16, 0.3)) == 0.0);
    CHECK(energy(GrayImage(16, 16, 0.3)) == 1.0);

    std::vector<double> half(64, 0.0);
    std::fill(half.begin() + 32, half.end(), 1.0);
    CHECK(entropy(GrayImage(8, 8, half)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(energy(GrayImage(8, 8, half)) == 0.5);

    std::vector<std::uint8_t> all(256);
    for (int i = 0; i < 256; ++i) all[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    const auto spread = GrayImage::from_bytes(16, 16, all);
    CHECK(energy(spread) == doctest::Approx(1.0 / 256.0));
    CHECK(entropy(spread) == doctest::Approx(std::log(256.0)));

    // Hand-tallied 4x4 fixture: counts {2,1,1,1,3,1,2,1,1,3} / 16.
    const std::vector<std::uint8_t> bytes = {0, 0, 1, 2, 64, 64, 64, 127, 128, 128, 200, 255, 255, 255, 254, 3};
    double expected = 0.0;
    for (double c : {2, 1, 1, 1, 3, 1, 2, 1, 1, 3}) expected -= c / 16 * std::log(c / 16);
    CHECK(entropy(GrayImage::from_bytes(4, 4, bytes)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("entropy/energy properties") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 30; ++t) {
        const auto img = testing::random_image(rng, 3 + rng() % 30, 3 + rng() % 30);
        const double s = entropy(img), e = energy(img);
        CHECK(s == doctest::Approx(brute_entropy(img)).epsilon(1e-12));
        CHECK(s >= 0.0);
        CHECK(s <= std::log(256.0) + 1e-12);
        CHECK(e >= 1.0 / 256.0 - 1e-15);
        CHECK(e <= 1.0);
        CHECK((s == 0.0) == (histogram(img).occupied_bins() == 1));
        CHECK((e == 1.0) == (histogram(img).occupied_bins() == 1));

        // Pixel permutation leaves both unchanged.
        std::vector<double> px(img.pixels().begin(), img.pixels().end());
        std::shuffle(px.begin(), px.end(), rng);
        const GrayImage shuffled(img.width(), img.height(), px);
        CHECK(entropy(shuffled) == doctest::Approx(s).epsilon(1e-14));
        CHECK(energy(shuffled) == doctest::Approx(e).epsilon(1e-14));
    }
}

TEST_CASE("contours and euler number") {
    CHECK(contours(testing::disk_image()) == 1);
    CHECK(euler(testing::disk_image()) == 1);
    CHECK(contours(testing::annulus_image()) == 2);
    CHECK(euler(testing::annulus_image()) == 0);
    CHECK(contours(testing::three_disks_two_holes()) == 5);
    CHECK(euler(testing::three_disks_two_holes()) == 1);

    const auto flat = topology(GrayImage(20, 20, 0.5));
    CHECK(flat.degenerate);
    CHECK(flat.contours() == 0);
    CHECK(flat.euler() == 0);
}

TEST_CASE("topology on masks") {
    // Foreground bar across the image splits the background into two
    // border-touching pieces; neither is a hole.
    BinaryImage bar(9, 9, 0);
    for (std::size_t x = 0; x < 9; ++x) bar.set(x, 4, true);
    CHECK(topology(bar).components == 1);
    CHECK(topology(bar).holes == 0);

    // Diagonal foreground pixels are 8-connected; the enclosed background
    // pixel is a 4-connected hole.
    BinaryImage diamond(5, 5, 0);
    for (auto [x, y] : {std::pair{2, 1}, {1, 2}, {3, 2}, {2, 3}}) diamond.set(x, y, true);
    CHECK(topology(diamond).components == 1);
    CHECK(topology(diamond).holes == 1);

    std::mt19937_64 rng(8);
    for (int t = 0; t < 40; ++t) {
        const auto img = testing::random_image(rng, 5 + rng() % 30, 5 + rng() % 30);
        const auto topo = topology(img);
        CHECK(topo.contours() >= topo.euler());
        CHECK(static_cast<long>(topo.contours() - topo.euler()) % 2 == 0);
    }
}

TEST_CASE("algorithmic and structural complexity") {
    const auto constant = GrayImage(512, 512, 0.6);
    const auto noise = testing::noise_image(512, 512, 99);
    const auto smooth = testing::gradient_image(512, 512);
    const double ca_const = algorithmic_complexity(constant);
    const double ca_noise = algorithmic_complexity(noise);
    const double ca_smooth = algorithmic_complexity(smooth);
    CHECK(ca_const < 0.05);
    CHECK(ca_noise >= 1.0);
    CHECK(ca_noise > ca_smooth);
    CHECK(ca_smooth > ca_const);

    CHECK(structural_complexity(GrayImage(128, 128, 1.0)) < 0.05);

    // Salt-and-pepper: coarse-graining flattens the noise to a grey field.
    std::mt19937_64 rng(12);
    std::vector<double> sp(256 * 256);
    for (auto& v : sp) v = (rng() & 1) ? 1.0 : 0.0;
    const GrayImage salt(256, 256, sp);
    CHECK(structural_complexity(salt) < algorithmic_complexity(salt));
}

TEST_CASE("compressor sanity bound") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 10; ++t) {
        const std::size_t w = 16 + rng() % 80, h = 16 + rng() % 80;
        const auto img = testing::random_image(rng, w, h);
        CHECK(algorithmic_complexity(img) <= algorithmic_complexity(testing::noise_image(w, h, rng())) + 0.05);
    }
}

TEST_CASE("Machado-Cardoso complexity") {
    const auto constant = GrayImage(64, 64, 0.4);
    CHECK(mc_complexity(constant) < 1e-3);
    CHECK(mc_complexity_edges(constant) == 0.0);
    CHECK(mc_complexity(testing::noise_image(64, 64, 3)) > mc_complexity(testing::gradient_image(64, 64)));
    CHECK(mc_complexity_edges(testing::step_image(64, 64, 29)) > 0.0);
    CHECK_THROWS_AS(mc_complexity_edges(GrayImage(2, 2, 0.0)), InvalidInput);
}

TEST_CASE("box-counting dimension") {
    CHECK(box_counting_dimension(BinaryImage(256, 256, 1)).dimension == doctest::Approx(2.0).epsilon(1e-12));

    BinaryImage line(256, 256, 0);
    for (std::size_t x = 0; x < 256; ++x) line.set(x, 100, true);
    CHECK(box_counting_dimension(line).dimension == doctest::Approx(1.0).epsilon(1e-12));

    const auto carpet = box_counting_dimension(testing::sierpinski_carpet());
    CHECK(std::abs(carpet.dimension - std::log(8.0) / std::log(3.0)) <= 0.05);
    CHECK(carpet.counts.size() == 8);  // 2 .. 256

    const auto empty = box_counting_dimension(BinaryImage(64, 64, 0));
    CHECK(empty.degenerate);
    CHECK(empty.dimension == 0.0);
    CHECK_THROWS_AS(box_counting_dimension(BinaryImage(31, 64, 1)), InvalidInput);
    CHECK_NOTHROW(box_counting_dimension(BinaryImage(32, 32, 1)));

    // Partial cells at the right and bottom edges still count.
    BinaryImage corner(40, 40, 0);
    corner.set(39, 39, true);
    const auto c = box_counting_dimension(corner);
    for (const auto& bc : c.counts) CHECK(bc.occupied == 1.0);

    const auto offsets = box_counting_dimension(testing::sierpinski_carpet(), true);
    CHECK(offsets.dimension > 1.7);
    CHECK(offsets.dimension < 2.0);
}

TEST_CASE("fractal aesthetic") {
    const FractalAestheticParams fa;  // (1.35, 0.2)
    CHECK(fractal_aesthetic(1.35, fa) == 1.0);
    CHECK(fractal_aesthetic(1.55, fa) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(fractal_aesthetic(1.55, fa) == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK(fractal_aesthetic(0.95, fa) == doctest::Approx(fractal_aesthetic(1.75, fa)).epsilon(1e-14));
    double prev = 1.0;
    for (double d = 0.01; d < 1.5; d += 0.01) {
        const double v = fractal_aesthetic(1.35 + d, fa);
        CHECK(v < prev);
        CHECK(v == doctest::Approx(fractal_aesthetic(1.35 - d, fa)).epsilon(1e-12));
        prev = v;
    }
    CHECK_THROWS_AS(fractal_aesthetic(1.0, {1.35, 0.0}), InvalidParameter);
}

TEST_CASE("skew") {
    std::vector<double> half(100, 0.2);
    std::fill(half.begin() + 50, half.end(), 0.8);
    CHECK(skew(GrayImage(10, 10, half)) == doctest::Approx(0.0).epsilon(1e-12));

    std::vector<double> mix(100, 0.1);
    std::fill(mix.begin() + 90, mix.end(), 0.9);
    // Bernoulli(p = 0.1) scaled: (1 - 2p) / sqrt(p (1 - p)) = 0.8 / 0.3.
    CHECK(skew(GrayImage(10, 10, mix)) == doctest::Approx(0.8 / 0.3).epsilon(1e-12));

    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const auto img = testing::random_image(rng, 4 + rng() % 20, 4 + rng() % 20);
        if (histogram(img).occupied_bins() < 2) continue;
        std::vector<double> inv(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) inv[i] = 1.0 - img.pixels()[i];
        CHECK(skew(GrayImage(img.width(), img.height(), inv)) == doctest::Approx(-skew(img)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(skew(GrayImage(5, 5, 0.5)), UndefinedValue);
}

TEST_CASE("measure_all on a constant image") {
    const auto mv = measure_all(GrayImage(64, 64, 1.0));
    CHECK(*mv[Measure::Entropy] == 0.0);
    CHECK(*mv[Measure::Energy] == 1.0);
    CHECK(*mv[Measure::Contours] == 0.0);
    CHECK(*mv[Measure::Euler] == 0.0);
    CHECK(*mv[Measure::AlgorithmicComplexity] < 0.05);
    CHECK(*mv[Measure::StructuralComplexity] < 0.05);
    CHECK(*mv[Measure::MachadoCardoso] < 1e-3);
    CHECK(*mv[Measure::MachadoCardosoEdges] < 1e-3);
    CHECK(*mv[Measure::FractalDimension] == 0.0);
    CHECK(mv.fractal_degenerate);
    CHECK(mv.binarization_degenerate);
    CHECK(*mv[Measure::FractalAesthetic] == doctest::Approx(std::exp(-1.35 * 1.35 / 0.08)).epsilon(1e-14));
    CHECK_FALSE(mv[Measure::Skew].has_value());
    CHECK(mv.warnings.size() == 1);
}

TEST_CASE("measure_all equals individual calls") {
    std::mt19937_64 rng(41);
    const MeasureConfig cfg;
    for (int t = 0; t < 20; ++t) {
        const auto img = testing::random_image(rng, 32 + rng() % 40, 32 + rng() % 40);
        const auto mv = measure_all(img, cfg);
        CHECK(*mv[Measure::Entropy] == entropy(img));
        CHECK(*mv[Measure::Energy] == energy(img));
        CHECK(*mv[Measure::Contours] == contours(img));
        CHECK(*mv[Measure::Euler] == euler(img));
        CHECK(*mv[Measure::AlgorithmicComplexity] == algorithmic_complexity(img));
        CHECK(*mv[Measure::StructuralComplexity] == structural_complexity(img, cfg.structural));
        CHECK(*mv[Measure::MachadoCardoso] == mc_complexity(img, cfg.lossy));
        CHECK(*mv[Measure::MachadoCardosoEdges] == mc_complexity_edges(img, cfg.lossy));
        CHECK(*mv[Measure::FractalDimension] == fractal_dimension(img, cfg.fractal_binarization).dimension);
        CHECK(*mv[Measure::FractalAesthetic] == fractal_aesthetic(img, cfg.aesthetic, cfg.fractal_binarization));
        if (mv[Measure::Skew]) CHECK(*mv[Measure::Skew] == skew(img));
    }
}

TEST_CASE("measure_all records per-measure failures") {
    // Too small for box counting: D and D_a go missing, the rest survive.
    std::mt19937_64 rng(2);
    const auto mv = measure_all(testing::random_image(rng, 20, 20));
    CHECK_FALSE(mv[Measure::FractalDimension].has_value());
    CHECK_FALSE(mv[Measure::FractalAesthetic].has_value());
    CHECK(mv[Measure::Entropy].has_value());
    CHECK(mv[Measure::MachadoCardoso].has_value());
    CHECK_FALSE(mv.warnings.empty());

    MeasureConfig bad;
    bad.lossy.quality = 0.0;
    CHECK_THROWS_AS(measure_all(GrayImage(40, 40, 0.5), bad), InvalidParameter);
}

TEST_CASE("measure names round trip") {
    for (Measure m : kAllMeasures) CHECK(measure_from_name(measure_name(m)) == m);
    CHECK_FALSE(measure_from_name("nope").has_value());
}
