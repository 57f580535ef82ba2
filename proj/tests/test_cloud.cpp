#include <doctest.h>

#include "helpers.hpp"
#include "kdss/cloud.hpp"
#include "kdss/error.hpp"
#include "kdss/partition.hpp"
#include "kdss/schema.hpp"

using namespace kdss;

TEST_SUITE_BEGIN("cloud");

TEST_CASE("consistent channels validate clean") {
    PointCloud cloud;
    cloud.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    cloud.colors = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    CHECK(validate_cloud(cloud).empty());
}

TEST_CASE("short color channel is reported") {
    PointCloud cloud;
    cloud.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    cloud.colors = {{1, 2, 3}, {4, 5, 6}};
    const auto issues = validate_cloud(cloud);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].channel == "colors");
    CHECK(issues[0].message.find("colors length mismatch") != std::string::npos);
}

TEST_CASE("label beyond the class map names the offending point") {
    PointCloud cloud;
    cloud.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    cloud.labels = {0, 5, 2};
    cloud.class_map = ClassMap({"stem", "leaf", "panicle"});
    const auto issues = validate_cloud(cloud);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].channel == "labels");
    CHECK(issues[0].point == 1);
    CHECK(issues[0].message.find("5") != std::string::npos);
}

TEST_CASE("normal norm check respects the unnormalized flag") {
    PointCloud cloud;
    cloud.positions = {{0, 0, 0}};
    cloud.normals = {{3.0, 0.0, 0.0}};
    CHECK(validate_cloud(cloud).size() == 1);
    cloud.normals_are_unit = false;
    CHECK(validate_cloud(cloud).empty());
}

TEST_CASE("validate_cloud is empty exactly on intact clouds") {
    // Start from a valid cloud and apply every corruption we can express;
    // the report must flip from empty to non-empty and back.
    SeededRng rng(99);
    for (int round = 0; round < 50; ++round) {
        PointCloud cloud = testing::random_cloud(20 + rng.bounded(30), round, 3);
        cloud.class_map = ClassMap({"a", "b", "c"});
        cloud.normals.assign(cloud.size(), Vec3{0.0, 0.0, 1.0});
        cloud.intensity.assign(cloud.size(), 0.5);
        REQUIRE(validate_cloud(cloud).empty());

        PointCloud broken = cloud;
        switch (rng.bounded(5)) {
            case 0: broken.labels[rng.bounded(broken.size())] = 17; break;
            case 1: broken.labels[rng.bounded(broken.size())] = -1; break;
            case 2: broken.normals[rng.bounded(broken.size())] = {0, 0, 2}; break;
            case 3: broken.intensity.pop_back(); break;
            case 4: broken.predicted = {0}; break;
        }
        CHECK(!validate_cloud(broken).empty());
    }
}

TEST_CASE("class map rejects duplicates and empties") {
    CHECK_THROWS_AS(ClassMap({}), InputError);
    CHECK_THROWS_AS(ClassMap({"a", ""}), InputError);
    CHECK_THROWS_AS(ClassMap({"a", "a"}), InputError);
    const ClassMap map({"stem", "leaf"});
    CHECK(map.size() == 2);
    CHECK(map.id("leaf") == 1);
    CHECK(!map.id("panicle"));
}

TEST_CASE("schema widths and parsing") {
    const auto wheat = FeatureSchema::parse(
        "position,intensity,normalized_position");
    CHECK(wheat.total_width() == 7);
    const auto cherry = FeatureSchema::parse("position,color,normal");
    CHECK(cherry.total_width() == 9);
    CHECK(FeatureSchema::parse(wheat.to_string()) == wheat);

    CHECK_THROWS_AS(FeatureSchema::parse("position,position"), InputError);
    CHECK_THROWS_AS(FeatureSchema::parse("position,"), InputError);
    CHECK_THROWS_AS(FeatureSchema::parse("xyz"), InputError);
    CHECK(wheat.offset_of(Channel::intensity) == 3);
    CHECK(wheat.offset_of(Channel::color) == -1);
}

TEST_CASE("subsample set validation catches broken partitions") {
    SubSampleSet set;
    set.n_per_sample = 2;
    set.subsamples.push_back({4, {0, 1}, 0, 0});
    set.subsamples.push_back({4, {2, 3}, 3, 1});
    CHECK(validate_subsample_set(set).empty());

    SUBCASE("duplicate coverage") {
        set.subsamples[1].indices = {1, 3};
        CHECK(!validate_subsample_set(set).empty());
    }
    SUBCASE("missing point") {
        set.subsamples[1].indices = {3};
        CHECK(!validate_subsample_set(set).empty());
    }
    SUBCASE("center not a member") {
        set.subsamples[0].center_index = 3;
        CHECK(!validate_subsample_set(set).empty());
    }
    SUBCASE("non-last short subsample") {
        set.subsamples[0].indices = {0};
        set.subsamples[1].indices = {1, 2};
        set.subsamples[1].center_index = 2;
        CHECK(!validate_subsample_set(set).empty());
    }
}

TEST_SUITE_END();
