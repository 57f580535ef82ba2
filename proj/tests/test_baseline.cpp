#include <doctest.h>

#include <cstdlib>

#include <algorithm>

#include "helpers.hpp"
#include "kdss/baseline.hpp"
#include "kdss/error.hpp"

using namespace kdss;

namespace {

FeatureMatrix matrix_of(const FeatureSchema& schema,
                        std::vector<double> values) {
    FeatureMatrix m;
    m.schema = schema;
    m.rows = values.size() / schema.total_width();
    m.values = std::move(values);
    return m;
}

// Two well-separated position clusters with constant labels.
struct TwoClusters {
    FeatureMatrix train;
    std::vector<std::int32_t> train_labels;
    FeatureMatrix test;
    std::vector<std::int32_t> test_labels;

    explicit TwoClusters(std::size_t per_cluster, std::uint64_t seed) {
        const FeatureSchema schema({Channel::position});
        SeededRng rng(seed);
        std::vector<double> train_values, test_values;
        const auto emit = [&](std::vector<double>& dst, double cx,
                              std::int32_t label,
                              std::vector<std::int32_t>& labels) {
            // intra-cluster spread 0.05, separation 1.0 (20x)
            dst.push_back(cx + 0.05 * rng.gaussian());
            dst.push_back(0.05 * rng.gaussian());
            dst.push_back(0.05 * rng.gaussian());
            labels.push_back(label);
        };
        for (std::size_t i = 0; i < per_cluster; ++i) {
            emit(train_values, 0.0, 0, train_labels);
            emit(train_values, 1.0, 1, train_labels);
            emit(test_values, 0.0, 0, test_labels);
            emit(test_values, 1.0, 1, test_labels);
        }
        train = matrix_of(schema, std::move(train_values));
        test = matrix_of(schema, std::move(test_values));
    }
};

}  // namespace

TEST_SUITE_BEGIN("baseline");

TEST_CASE("fit rejects mismatched schemas") {
    const auto wheat = FeatureSchema::parse("position,intensity,normalized_position");
    const auto cherry = FeatureSchema::parse("position,color,normal");
    const FeatureMatrix a = matrix_of(wheat, std::vector<double>(7, 0.0));
    const FeatureMatrix b = matrix_of(cherry, std::vector<double>(9, 0.0));
    const std::vector<FeatureMatrix> matrices{a, b};
    CHECK_THROWS_WITH_AS(fit(matrices, {{0}, {1}}, 1),
                         doctest::Contains("schema mismatch"), InputError);
}

TEST_CASE("fit stores every row of a single matrix") {
    const FeatureSchema schema({Channel::position});
    const FeatureMatrix m =
        matrix_of(schema, {0, 0, 0, 1, 0, 0, 2, 0, 0, 3, 0, 0});
    const std::vector<FeatureMatrix> matrices{m};
    const KnnModel model = fit(matrices, {{0, 1, 0, 1}}, 2);
    CHECK(model.row_count() == 4);
    CHECK(model.k_vote() == 2);

    CHECK_THROWS_AS(fit(matrices, {{0, 1}}, 1), InputError);    // label shape
    CHECK_THROWS_AS(fit(matrices, {{0, 1, 0, 1}}, 9), InputError);  // k > rows
}

TEST_CASE("k_vote=1 reproduces training labels on training rows") {
    const TwoClusters data(100, 7);
    const std::vector<FeatureMatrix> matrices{data.train};
    const KnnModel model = fit(matrices, {data.train_labels}, 1);
    CHECK(model.predict(data.train) == data.train_labels);
}

TEST_CASE("well-separated clusters classify almost perfectly") {
    const TwoClusters data(300, 8);
    const std::vector<FeatureMatrix> matrices{data.train};
    const KnnModel model = fit(matrices, {data.train_labels}, 5);
    const std::vector<std::int32_t> pred = model.predict(data.test);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] == data.test_labels[i]) ++agree;
    }
    CHECK(static_cast<double>(agree) / pred.size() >= 0.99);
}

TEST_CASE("vote ties resolve to the smallest class id") {
    const FeatureSchema schema({Channel::position});
    // Two training rows equidistant from the query, labels 2 and 0.
    const FeatureMatrix train =
        matrix_of(schema, {-1, 0, 0, /*row 1*/ 1, 0, 0});
    const std::vector<FeatureMatrix> matrices{train};
    const KnnModel model = fit(matrices, {{2, 0}}, 2);
    const FeatureMatrix query = matrix_of(schema, {0, 0, 0});
    CHECK(model.predict(query) == std::vector<std::int32_t>{0});
}

TEST_CASE("prediction is invariant to training row order") {
    const TwoClusters data(50, 9);
    SeededRng rng(10);
    std::vector<std::size_t> order(data.train_labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    FeatureMatrix shuffled = data.train;
    std::vector<std::int32_t> shuffled_labels(data.train_labels.size());
    const std::size_t w = data.train.width();
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t c = 0; c < w; ++c) {
            shuffled.values[i * w + c] = data.train.values[order[i] * w + c];
        }
        shuffled_labels[i] = data.train_labels[order[i]];
    }

    const std::vector<FeatureMatrix> m1{data.train};
    const std::vector<FeatureMatrix> m2{shuffled};
    const KnnModel a = fit(m1, {data.train_labels}, 3);
    const KnnModel b = fit(m2, {shuffled_labels}, 3);
    CHECK(a.predict(data.test) == b.predict(data.test));
}

TEST_CASE("indexed route equals the linear-scan route") {
    SeededRng rng(11);
    for (int round = 0; round < 10; ++round) {
        const FeatureSchema schema =
            FeatureSchema::parse("position,intensity,normalized_position");
        const std::size_t rows = 50 + rng.bounded(200);
        std::vector<double> values;
        std::vector<std::int32_t> labels;
        for (std::size_t r = 0; r < rows; ++r) {
            for (int c = 0; c < 7; ++c) values.push_back(rng.unit());
            labels.push_back(static_cast<std::int32_t>(rng.bounded(4)));
        }
        const FeatureMatrix train = matrix_of(schema, std::move(values));
        const std::vector<FeatureMatrix> matrices{train};
        const KnnModel model = fit(matrices, {labels}, 1 + rng.bounded(7));

        std::vector<double> queries;
        for (int q = 0; q < 40 * 7; ++q) queries.push_back(rng.unit());
        const FeatureMatrix test = matrix_of(schema, std::move(queries));
        CHECK(model.predict(test) == model.predict_linear(test));
    }
}

TEST_CASE("wide schemas fall back to the linear route with equal results") {
    // Width 13 leads with intensity, so the kd index must not engage.
    const FeatureSchema schema = FeatureSchema::parse(
        "intensity,position,color,normal,normalized_position");
    REQUIRE(schema.total_width() == 13);
    SeededRng rng(12);
    std::vector<double> values;
    std::vector<std::int32_t> labels;
    for (int r = 0; r < 100; ++r) {
        for (int c = 0; c < 13; ++c) values.push_back(rng.unit());
        labels.push_back(static_cast<std::int32_t>(rng.bounded(3)));
    }
    const FeatureMatrix train = matrix_of(schema, std::move(values));
    const std::vector<FeatureMatrix> matrices{train};
    const KnnModel model = fit(matrices, {labels}, 3);
    std::vector<double> queries;
    for (int q = 0; q < 20 * 13; ++q) queries.push_back(rng.unit());
    const FeatureMatrix test = matrix_of(schema, std::move(queries));
    CHECK(model.predict(test) == model.predict_linear(test));
}

TEST_CASE("predict rejects a foreign schema") {
    const TwoClusters data(10, 13);
    const std::vector<FeatureMatrix> matrices{data.train};
    const KnnModel model = fit(matrices, {data.train_labels}, 1);
    const FeatureMatrix other =
        matrix_of(FeatureSchema::parse("position,intensity"),
                  std::vector<double>(4, 0.0));
    CHECK_THROWS_AS(model.predict(other), InputError);
}

TEST_CASE("a thread cap above one leaves predictions unchanged") {
    const TwoClusters data(1500, 15);  // 3000 query rows crosses the
                                       // parallel_for chunking threshold
    const std::vector<FeatureMatrix> matrices{data.train};
    const KnnModel model = fit(matrices, {data.train_labels}, 3);

    setenv("KDSS_THREADS", "1", 1);
    const auto serial = model.predict(data.test);
    setenv("KDSS_THREADS", "4", 1);
    const auto threaded = model.predict(data.test);
    unsetenv("KDSS_THREADS");
    CHECK(serial == threaded);
}

TEST_CASE("model persistence round-trips and predicts identically") {
    kdss::testing::TempDir tmp;
    const TwoClusters data(80, 14);
    const std::vector<FeatureMatrix> matrices{data.train};
    const KnnModel model = fit(matrices, {data.train_labels}, 3);
    save_model(model, tmp.file("m.kdsm"));
    const KnnModel back = load_model(tmp.file("m.kdsm"));
    CHECK(back.k_vote() == model.k_vote());
    CHECK(back.schema() == model.schema());
    CHECK(back.row_count() == model.row_count());
    CHECK(std::equal(back.features().begin(), back.features().end(),
                     model.features().begin(), model.features().end()));
    CHECK(back.predict(data.test) == model.predict(data.test));

    CHECK_THROWS_AS(load_model(tmp.file("missing.kdsm")), IoError);
}

TEST_SUITE_END();
