#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "kdss/error.hpp"
#include "kdss/features.hpp"
#include "kdss/subsample.hpp"

using namespace kdss;

namespace {

SubSample whole_cloud(const PointCloud& cloud) {
    SubSample sub;
    sub.parent_size = cloud.size();
    sub.indices.resize(cloud.size());
    std::iota(sub.indices.begin(), sub.indices.end(), PointIndex{0});
    sub.center_index = 0;
    return sub;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("two-point normalization with degenerate axes") {
    PointCloud cloud;
    cloud.positions = {{2, 0, 0}, {4, 0, 0}};
    const auto out = normalize_coordinates(cloud, whole_cloud(cloud));
    CHECK(out[0] == Vec3{0, 0, 0});
    CHECK(out[1] == Vec3{1, 0, 0});
}

TEST_CASE("single point normalizes to the origin") {
    PointCloud cloud;
    cloud.positions = {{5, -3, 9}};
    const auto out = normalize_coordinates(cloud, whole_cloud(cloud));
    CHECK(out[0] == Vec3{0, 0, 0});
}

TEST_CASE("normalized output stays in the unit cube and attains the min") {
    const PointCloud cloud = testing::random_cloud(200, 3);
    const SubSample sub = whole_cloud(cloud);
    const auto out = normalize_coordinates(cloud, sub);

    double axis_min[3] = {1e9, 1e9, 1e9};
    for (const Vec3& v : out) {
        for (int a = 0; a < 3; ++a) {
            CHECK(v[a] >= 0.0);
            CHECK(v[a] <= 1.0);
            axis_min[a] = std::min(axis_min[a], v[a]);
        }
    }
    for (int a = 0; a < 3; ++a) CHECK(axis_min[a] == doctest::Approx(0.0));
}

TEST_CASE("normalization is invariant to shift and positive scale") {
    const PointCloud cloud = testing::random_cloud(100, 4);
    const SubSample sub = whole_cloud(cloud);
    PointCloud moved = cloud;
    for (Vec3& p : moved.positions) {
        p = {p.x * 3.5 + 10.0, p.y * 3.5 - 2.0, p.z * 3.5 + 0.25};
    }
    const auto a = normalize_coordinates(cloud, sub);
    const auto b = normalize_coordinates(moved, sub);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int axis = 0; axis < 3; ++axis) {
            CHECK(a[i][axis] == doctest::Approx(b[i][axis]).epsilon(1e-9));
        }
    }
}

TEST_CASE("assembled widths match the dataset families") {
    PointCloud wheat = testing::random_cloud(50, 5);
    wheat.intensity.assign(50, 0.25);
    const auto wheat_schema =
        FeatureSchema::parse("position,intensity,normalized_position");
    const FeatureMatrix wm = assemble(wheat, whole_cloud(wheat), wheat_schema);
    CHECK(wm.width() == 7);
    CHECK(wm.rows == 50);

    PointCloud cherry = testing::random_cloud(50, 6);
    cherry.colors.assign(50, Rgb{10, 20, 30});
    cherry.normals.assign(50, Vec3{0, 0, 1});
    const FeatureMatrix cm = assemble(
        cherry, whole_cloud(cherry), FeatureSchema::parse("position,color,normal"));
    CHECK(cm.width() == 9);
    CHECK(cm.at(0, 3) == doctest::Approx(10.0 / 255.0));
}

TEST_CASE("missing channels are named") {
    const PointCloud bare = testing::random_cloud(5, 7);
    CHECK_THROWS_WITH_AS(
        assemble(bare, whole_cloud(bare), FeatureSchema::parse("position,color")),
        "missing channel: color", InputError);
    CHECK_THROWS_AS(
        assemble(bare, whole_cloud(bare), FeatureSchema::parse("intensity")),
        InputError);
}

TEST_CASE("rows follow extraction order") {
    PointCloud cloud = testing::random_cloud(30, 8);
    SubSample sub;
    sub.parent_size = 30;
    sub.indices = {7, 3, 19};
    sub.center_index = 3;
    const FeatureMatrix m =
        assemble(cloud, sub, FeatureSchema({Channel::position}));
    for (std::size_t j = 0; j < sub.indices.size(); ++j) {
        CHECK(m.at(j, 0) == cloud.positions[sub.indices[j]].x);
        CHECK(m.at(j, 2) == cloud.positions[sub.indices[j]].z);
    }
}

TEST_CASE("class weights invert frequencies") {
    std::vector<std::int32_t> balanced(100);
    for (std::size_t i = 0; i < 100; ++i) balanced[i] = i < 50 ? 0 : 1;
    CHECK(class_weights(balanced, 2).weights ==
          std::vector<double>{0.5, 0.5});

    std::vector<std::int32_t> skewed(100);
    for (std::size_t i = 0; i < 100; ++i) skewed[i] = i < 90 ? 0 : 1;
    const auto w = class_weights(skewed, 2).weights;
    CHECK(w[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.9).epsilon(1e-12));

    std::vector<std::int32_t> gappy(20);
    for (std::size_t i = 0; i < 20; ++i) gappy[i] = i < 10 ? 0 : 2;
    const auto g = class_weights(gappy, 3).weights;
    CHECK(g[0] == doctest::Approx(0.5));
    CHECK(g[1] == 0.0);
    CHECK(g[2] == doctest::Approx(0.5));
}

TEST_CASE("class weight properties") {
    SeededRng rng(19);
    for (int round = 0; round < 40; ++round) {
        const std::size_t C = 1 + rng.bounded(8);
        std::vector<std::int32_t> labels(1 + rng.bounded(500));
        for (auto& l : labels) l = static_cast<std::int32_t>(rng.bounded(C));

        const auto w = class_weights(labels, C).weights;
        const double sum = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-9);

        // Scaling every count by a constant leaves the weights unchanged.
        std::vector<std::int32_t> tripled;
        for (int rep = 0; rep < 3; ++rep) {
            tripled.insert(tripled.end(), labels.begin(), labels.end());
        }
        const auto w3 = class_weights(tripled, C).weights;
        for (std::size_t c = 0; c < C; ++c) {
            CHECK(w[c] == doctest::Approx(w3[c]).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(class_weights({}, 2), InputError);
}

TEST_CASE("split hits the 90/10 protocol") {
    std::vector<std::string> units;
    for (int i = 0; i < 10; ++i) units.push_back("plot" + std::to_string(i));
    const SplitAssignment a = split(units, 0.9, 0.1, 42);
    CHECK(a.count(SplitTag::train) == 9);
    CHECK(a.count(SplitTag::val) == 1);
    CHECK(a.count(SplitTag::test) == 0);
}

TEST_CASE("tiny unit sets still give every requested partition one unit") {
    const std::vector<std::string> three{"a", "b", "c"};
    const SplitAssignment a = split(three, 0.9, 0.1, 1);
    CHECK(a.count(SplitTag::train) == 2);
    CHECK(a.count(SplitTag::val) == 1);
    CHECK(a.count(SplitTag::test) == 0);

    const std::vector<std::string> five{"a", "b", "c", "d", "e"};
    const SplitAssignment b = split(five, 0.5, 0.5, 1);
    CHECK(b.count(SplitTag::train) == 3);
    CHECK(b.count(SplitTag::val) == 2);

    // one unit short of the three requested partitions
    const std::vector<std::string> two{"a", "b"};
    CHECK_THROWS_WITH_AS(split(two, 0.4, 0.3, 1),
                         "fewer units than requested non-empty partitions",
                         InputError);
    const SplitAssignment c = split(three, 0.4, 0.3, 1);
    CHECK(c.count(SplitTag::train) == 1);
    CHECK(c.count(SplitTag::val) == 1);
    CHECK(c.count(SplitTag::test) == 1);
}

TEST_CASE("single unit all train") {
    const std::vector<std::string> units{"only"};
    const SplitAssignment a = split(units, 1.0, 0.0, 1);
    CHECK(a.tags == std::vector<SplitTag>{SplitTag::train});
}

TEST_CASE("split reproducibility and failure modes") {
    std::vector<std::string> units;
    for (int i = 0; i < 100; ++i) units.push_back(std::to_string(i));
    const SplitAssignment a = split(units, 0.8, 0.1, 7);
    const SplitAssignment b = split(units, 0.8, 0.1, 7);
    CHECK(a.tags == b.tags);
    CHECK(a.count(SplitTag::train) == 80);
    CHECK(a.count(SplitTag::val) == 10);
    CHECK(a.count(SplitTag::test) == 10);

    const SplitAssignment c = split(units, 0.8, 0.1, 8);
    CHECK(c.tags != a.tags);
    CHECK(c.count(SplitTag::train) == 80);

    CHECK_THROWS_AS(split(units, 0.0, 0.5, 1), InputError);
    CHECK_THROWS_AS(split(units, 0.8, 0.4, 1), InputError);
    const std::vector<std::string> dup{"a", "a"};
    CHECK_THROWS_AS(split(dup, 0.5, 0.5, 1), InputError);
}

TEST_CASE("rotation by zero is the identity") {
    PointCloud cloud = testing::random_cloud(40, 9);
    cloud.normals.assign(40, Vec3{0, 0, 1});
    const FeatureMatrix m =
        assemble(cloud, whole_cloud(cloud),
                 FeatureSchema::parse("position,normal,normalized_position"));
    const FeatureMatrix r = augment_rotate_z(m, 0.0);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        CHECK(r.values[i] == doctest::Approx(m.values[i]).epsilon(1e-15));
    }
}

TEST_CASE("half turn flips the x axis") {
    PointCloud cloud;
    cloud.positions = {{1, 0, 0}, {0, 0, 0}};
    const FeatureMatrix m = assemble(cloud, whole_cloud(cloud),
                                     FeatureSchema({Channel::position}));
    const FeatureMatrix r = augment_rotate_z(m, 3.14159265358979323846);
    CHECK(r.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(r.at(0, 1)) < 1e-9);
    CHECK(r.at(0, 2) == 0.0);
}

TEST_CASE("rotation preserves pairwise distances and recomputes the cube") {
    const PointCloud cloud = testing::random_cloud(60, 10);
    const FeatureMatrix m =
        assemble(cloud, whole_cloud(cloud),
                 FeatureSchema::parse("position,normalized_position"));
    SeededRng rng(11);
    for (int round = 0; round < 5; ++round) {
        const FeatureMatrix r = augment_rotate_z(m, rng.unit() * 6.283);
        for (std::size_t i = 0; i < 20; ++i) {
            const std::size_t a = rng.bounded(m.rows);
            const std::size_t b = rng.bounded(m.rows);
            const auto dist = [](const FeatureMatrix& fm, std::size_t p,
                                 std::size_t q) {
                double sum = 0;
                for (int axis = 0; axis < 3; ++axis) {
                    const double d = fm.at(p, axis) - fm.at(q, axis);
                    sum += d * d;
                }
                return std::sqrt(sum);
            };
            CHECK(dist(r, a, b) == doctest::Approx(dist(m, a, b)).epsilon(1e-9));
        }
        for (std::size_t row = 0; row < r.rows; ++row) {
            for (int axis = 0; axis < 3; ++axis) {
                CHECK(r.at(row, 3 + axis) >= 0.0);
                CHECK(r.at(row, 3 + axis) <= 1.0);
            }
        }
    }
    CHECK_THROWS_AS(
        augment_rotate_z(
            FeatureMatrix{FeatureSchema({Channel::intensity}), 0, {}}, 1.0),
        InputError);
}

TEST_SUITE_END();
