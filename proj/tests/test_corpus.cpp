#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "leaklab/csv.hpp"
#include "leaklab/folding.hpp"
#include "leaklab/inject.hpp"
#include "leaklab/synth.hpp"

using namespace leaklab;
using corpus::Dataset;
using corpus::SyntheticSpec;

namespace {

SyntheticSpec base_spec() {
    SyntheticSpec spec;
    spec.n = 200;
    spec.p = 6;
    spec.class_sep = 0.8;
    spec.imbalance = 0.4;
    spec.seed = 11;
    return spec;
}

std::filesystem::path write_temp_csv(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_SUITE("corpus") {

TEST_CASE("generation is a pure function of the spec") {
    const auto a = corpus::gen_synthetic(base_spec());
    const auto b = corpus::gen_synthetic(base_spec());
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.content_hash == b.content_hash);

    auto other = base_spec();
    other.seed = 12;
    CHECK(corpus::gen_synthetic(other).content_hash != a.content_hash);
}

TEST_CASE("imbalance lands within one row of the target") {
    for (double imb : {0.1, 0.25, 0.37, 0.5}) {
        auto spec = base_spec();
        spec.n = 333;
        spec.imbalance = imb;
        const auto d = corpus::gen_synthetic(spec);
        CHECK(std::abs(d.positives() - imb * spec.n) <= 1.0);
    }
}

TEST_CASE("categorical columns are 4-level codes with the mask set") {
    auto spec = base_spec();
    spec.n_categorical = 2;
    const auto d = corpus::gen_synthetic(spec);
    CHECK(d.categorical_mask[0]);
    CHECK(d.categorical_mask[1]);
    CHECK_FALSE(d.categorical_mask[2]);
    std::set<double> levels;
    for (std::size_t i = 0; i < d.n(); ++i) levels.insert(d.features(i, 0));
    CHECK(levels == std::set<double>{0.0, 1.0, 2.0, 3.0});
}

TEST_CASE("zero separation scores at chance, large separation near perfect") {
    auto flat = base_spec();
    flat.n = 400;
    flat.p = 2;
    flat.class_sep = 0.0;
    flat.imbalance = 0.5;
    const auto d0 = corpus::gen_synthetic(flat);
    const auto plan0 = folding::stratified_kfold(d0.labels, 5, 1);
    const auto auc0 =
        inject::cv_oof(d0.features, d0.labels, plan0, models::default_spec(models::Algorithm::LR))
            .pooled_auc;
    CHECK(std::abs(auc0 - 0.5) < 0.08);

    auto wide = flat;
    wide.class_sep = 8.0;
    const auto d1 = corpus::gen_synthetic(wide);
    const auto auc1 =
        inject::cv_oof(d1.features, d1.labels, folding::stratified_kfold(d1.labels, 5, 1),
                       models::default_spec(models::Algorithm::LR))
            .pooled_auc;
    CHECK(auc1 > 0.99);
}

TEST_CASE("content hash reacts to single-cell perturbations") {
    auto d = corpus::gen_synthetic(base_spec());
    const auto before = d.content_hash;
    d.features(3, 2) += 1e-9;
    corpus::rehash(d);
    CHECK(d.content_hash != before);
}

TEST_CASE("spec validation") {
    auto bad = base_spec();
    bad.imbalance = 0.0;
    CHECK_THROWS_AS(corpus::gen_synthetic(bad), std::invalid_argument);
    bad = base_spec();
    bad.n = 100;
    bad.imbalance = 0.01; // imbalance * n < 2
    CHECK_THROWS_AS(corpus::gen_synthetic(bad), std::invalid_argument);
    bad = base_spec();
    bad.n_categorical = bad.p + 1;
    CHECK_THROWS_AS(corpus::gen_synthetic(bad), std::invalid_argument);
}

TEST_CASE("temporal drift: construction and the stationary path") {
    auto spec = base_spec();
    spec.drift = 0.0;
    const auto d = corpus::gen_temporal_drift(spec);
    REQUIRE(d.time_index.has_value());
    for (int i = 0; i < spec.n; ++i) CHECK((*d.time_index)[static_cast<std::size_t>(i)] == i);
    // drift = 0 delegates: identical features to the plain generator
    CHECK(d.features == corpus::gen_synthetic(spec).features);

    auto drifting = spec;
    drifting.drift = 2.0 / spec.n;
    const auto dd = corpus::gen_temporal_drift(drifting);
    CHECK(dd.features != d.features);

    auto negative = spec;
    negative.drift = -0.1;
    CHECK_THROWS_AS(corpus::gen_temporal_drift(negative), std::invalid_argument);
}

TEST_CASE("grouped generation populates groups of at least two rows") {
    auto spec = base_spec();
    spec.n_groups = 40;
    spec.group_offset = 1.0;
    const auto d = corpus::gen_grouped(spec);
    REQUIRE(d.group_id.has_value());
    std::map<int, int> counts;
    std::map<int, std::set<int>> labels_by_group;
    for (std::size_t i = 0; i < d.n(); ++i) {
        ++counts[(*d.group_id)[i]];
        labels_by_group[(*d.group_id)[i]].insert(d.labels[i]);
    }
    CHECK(counts.size() == 40);
    for (const auto& [g, c] : counts) CHECK(c >= 2);
    for (const auto& [g, labs] : labels_by_group) CHECK(labs.size() == 1); // label shared per group

    auto bad = spec;
    bad.n_groups = spec.n; // > n/2
    CHECK_THROWS_AS(corpus::gen_grouped(bad), std::invalid_argument);
    bad.n_groups = 1;
    CHECK_THROWS_AS(corpus::gen_grouped(bad), std::invalid_argument);
}

TEST_CASE("assign_split is deterministic and balanced") {
    CHECK(corpus::assign_split("abc") == corpus::assign_split("abc"));
    CHECK_THROWS_AS(corpus::assign_split(""), std::invalid_argument);
    int discovery = 0;
    for (int i = 0; i < 1000; ++i)
        discovery += corpus::assign_split("dataset-" + std::to_string(i)) == corpus::Split::discovery;
    CHECK(discovery >= 450);
    CHECK(discovery <= 550);
}

TEST_CASE("csv round trip and parsing rules") {
    const auto path = write_temp_csv("leaklab_t1.csv",
                                     "f0,color,label\n"
                                     "1.5,red,0\n"
                                     "2.5,blue,1\n"
                                     "3.5,red,1\n"
                                     "4.5,green,0\n");
    const auto d = corpus::load_csv(path.string());
    CHECK(d.n() == 4);
    CHECK(d.p() == 2);
    CHECK_FALSE(d.categorical_mask[0]);
    CHECK(d.categorical_mask[1]);
    // first-appearance codes: red=0, blue=1, green=2
    CHECK(d.features(0, 1) == 0.0);
    CHECK(d.features(1, 1) == 1.0);
    CHECK(d.features(3, 1) == 2.0);
    CHECK(d.labels == std::vector<int>{0, 1, 1, 0});
    std::filesystem::remove(path);
}

TEST_CASE("csv error contract") {
    const auto single = write_temp_csv("leaklab_t2.csv", "f0,label\n1,1\n2,1\n3,1\n4,1\n");
    CHECK_THROWS_AS(corpus::load_csv(single.string()), std::invalid_argument);

    const auto missing = write_temp_csv("leaklab_t3.csv", "f0,f1,label\n1,,1\n2,3,0\n4,5,1\n6,7,0\n");
    CHECK_THROWS_WITH_AS(corpus::load_csv(missing.string()),
                         doctest::Contains("1 missing numeric cell"), std::invalid_argument);

    const auto empty = write_temp_csv("leaklab_t4.csv", "");
    CHECK_THROWS_AS(corpus::load_csv(empty.string()), std::invalid_argument);

    const auto no_label = write_temp_csv("leaklab_t5.csv", "f0,f1\n1,2\n");
    CHECK_THROWS_AS(corpus::load_csv(no_label.string()), std::invalid_argument);
    for (const char* f : {"leaklab_t2.csv", "leaklab_t3.csv", "leaklab_t4.csv", "leaklab_t5.csv"})
        std::filesystem::remove(std::filesystem::temp_directory_path() / f);
}

TEST_CASE("csv quoting, neg/pos labels and unparseable-label rows") {
    const auto path = write_temp_csv("leaklab_t6.csv",
                                     "name,f0,label\n"
                                     "\"a,b\",1.0,pos\n"
                                     "\"say \"\"hi\"\"\",2.0,neg\n"
                                     "c,3.0,maybe\n"
                                     "d,4.0,pos\n"
                                     "e,5.0,neg\n");
    const auto d = corpus::load_csv(path.string());
    CHECK(d.n() == 4); // the "maybe" row is rejected
    CHECK(d.labels == std::vector<int>{1, 0, 1, 0});
    CHECK(d.features(0, 0) == 0.0); // "a,b" is one categorical value
    std::filesystem::remove(path);
}

TEST_CASE("csv time column enforces canonical ordering") {
    const auto path = write_temp_csv("leaklab_t7.csv",
                                     "f0,label,time_index\n"
                                     "1,0,3\n"
                                     "2,1,1\n"
                                     "3,0,2\n"
                                     "4,1,0\n");
    corpus::CsvOptions opts;
    opts.time_column = "time_index";
    const auto d = corpus::load_csv(path.string(), opts);
    REQUIRE(d.time_index.has_value());
    CHECK(*d.time_index == std::vector<int>{0, 1, 2, 3});
    CHECK(d.features(0, 0) == 4.0); // row order follows time
    std::filesystem::remove(path);
}

TEST_CASE("save_csv/load_csv round trip preserves content") {
    auto spec = base_spec();
    spec.n_categorical = 1;
    auto d = corpus::gen_synthetic(spec);
    d.id = "roundtrip";
    corpus::rehash(d);
    const auto path = std::filesystem::temp_directory_path() / "roundtrip.csv";
    corpus::save_csv(d, path.string());
    const auto back = corpus::load_csv(path.string());
    CHECK(back.id == "roundtrip");
    CHECK(back.n() == d.n());
    CHECK(back.p() == d.p());
    CHECK(back.labels == d.labels);
    CHECK(back.features == d.features); // 17 significant digits round-trip doubles
    CHECK(back.content_hash == d.content_hash);
    std::filesystem::remove(path);
}

} // TEST_SUITE
