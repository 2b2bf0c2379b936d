#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "tgcn/schema.hpp"

using namespace tgcn;

namespace {

const char* kSchemaJson = R"({"features":[
  {"id":0,"name":"age","kind":"numeric"},
  {"id":1,"name":"on_dialysis","kind":"binary"},
  {"id":2,"name":"blood_type","kind":"categorical","categories":["A","B","O"]}
]})";

}  // namespace

TEST_CASE("schema parses and keeps feature order by id") {
    FeatureSchema s = parse_schema(kSchemaJson);
    REQUIRE(s.n_features() == 3);
    CHECK(s.at(0).name == "age");
    CHECK(s.at(0).kind == FeatureKind::Numeric);
    CHECK(s.at(1).kind == FeatureKind::Binary);
    CHECK(s.at(2).kind == FeatureKind::Categorical);
    CHECK(s.at(2).categories == std::vector<std::string>{"A", "B", "O"});
    CHECK(s.at(2).category_index("B") == 1);
    CHECK(s.at(2).category_index("AB") == -1);
    CHECK(s.non_categorical_ids() == std::vector<int>{0, 1});
    CHECK(s.categorical_ids() == std::vector<int>{2});
}

TEST_CASE("schema parse accepts shuffled ids and round-trips canonically") {
    const char* shuffled = R"({"features":[
      {"id":1,"name":"b","kind":"binary"},
      {"id":0,"name":"a","kind":"numeric"}
    ]})";
    FeatureSchema s = parse_schema(shuffled);
    CHECK(s.at(0).name == "a");
    CHECK(s.at(1).name == "b");
    std::string canon = write_schema_json(s);
    FeatureSchema again = parse_schema(canon);
    CHECK(again == s);
    CHECK(write_schema_json(again) == canon);
}

TEST_CASE("schema rejects malformed input") {
    CHECK_THROWS_AS(parse_schema("not json"), DataError);
    CHECK_THROWS_AS(parse_schema(R"({"features":[{"id":0,"name":"x","kind":"exotic"}]})"),
                    DataError);
    CHECK_THROWS_AS(parse_schema(R"({"features":[
        {"id":0,"name":"x","kind":"numeric"},
        {"id":0,"name":"y","kind":"numeric"}]})"),
                    DataError);  // duplicate id
    CHECK_THROWS_AS(parse_schema(R"({"features":[
        {"id":0,"name":"x","kind":"numeric"},
        {"id":2,"name":"y","kind":"numeric"}]})"),
                    DataError);  // gap in ids
    CHECK_THROWS_AS(parse_schema(R"({"features":[
        {"id":0,"name":"x","kind":"numeric"},
        {"id":1,"name":"x","kind":"binary"}]})"),
                    DataError);  // duplicate name
    CHECK_THROWS_AS(parse_schema(R"({"features":[{"id":0,"name":"x","kind":"categorical"}]})"),
                    DataError);  // categorical without categories
    CHECK_THROWS_AS(
        parse_schema(
            R"({"features":[{"id":0,"name":"x","kind":"categorical","categories":["a","a"]}]})"),
        DataError);  // duplicate category
    CHECK_THROWS_AS(
        parse_schema(R"({"features":[{"id":0,"name":"x","kind":"numeric","categories":["a"]}]})"),
        DataError);  // categories on a numeric feature
}

TEST_CASE("triplet parsing accepts good records and flags bad ones") {
    FeatureSchema s = parse_schema(kSchemaJson);
    std::istringstream in(
        "patient_id,feature_id,value\n"
        "0,0,63.5\n"
        "0,1,1\n"
        "0,2,A\n"
        "1,0,\n"          // explicit missing
        "1,1,yes\n"       // bad bit
        "1,2,AB\n"        // unknown category
        "2,0,heavy\n"     // bad number
        "7,0,1.0\n"       // patient out of range
        "0,9,1.0\n"       // unknown feature
        "0,0,64.0\n"      // duplicate (patient, feature)
        "1,0\n");         // field count
    TripletParseResult res = parse_triplets(in, s, 3);
    CHECK(res.records_in == 11);
    CHECK(res.issues.size() == 7);
    CHECK(res.cohort.triplets.size() + res.issues.size() == res.records_in);
    CHECK(res.cohort.n_patients == 3);
    CHECK(res.cohort.triplets[3].value.is_missing());
    CHECK(res.cohort.triplets[0].value.number == 63.5);
    // issue lines are 1-based file lines
    CHECK(res.issues.front().line == 6);
}

TEST_CASE("strict triplet parsing throws on the first issue") {
    FeatureSchema s = parse_schema(kSchemaJson);
    std::istringstream good("patient_id,feature_id,value\n0,0,1.5\n");
    Cohort c = parse_triplets_strict(good, s, 1);
    CHECK(c.triplets.size() == 1);

    std::istringstream bad("patient_id,feature_id,value\n0,0,abc\n");
    CHECK_THROWS_AS(parse_triplets_strict(bad, s, 1), DataError);

    std::istringstream no_header("0,0,1.5\n");
    CHECK_THROWS_AS(parse_triplets(no_header, s, 1), DataError);
}

TEST_CASE("labels parse exactly one 0/1 per patient") {
    std::istringstream ok("patient_id,label\n0,1\n2,0\n1,1\n");
    CHECK(parse_labels(ok, 3) == std::vector<int>{1, 1, 0});

    std::istringstream dup("patient_id,label\n0,1\n0,0\n1,1\n2,0\n");
    CHECK_THROWS_AS(parse_labels(dup, 3), DataError);
    std::istringstream missing("patient_id,label\n0,1\n");
    CHECK_THROWS_AS(parse_labels(missing, 2), DataError);
    std::istringstream bad("patient_id,label\n0,2\n");
    CHECK_THROWS_AS(parse_labels(bad, 1), DataError);
}

TEST_CASE("triplet and label CSV serialization round-trips") {
    Cohort c = fixtures::dense_cohort(4);
    c.labels = std::vector<int>{1, 0, 0, 1};
    std::string csv = write_triplets_csv(c);
    std::istringstream in(csv);
    TripletParseResult res = parse_triplets(in, c.schema, c.n_patients);
    CHECK(res.issues.empty());
    CHECK(res.cohort.triplets == c.triplets);
    CHECK(write_triplets_csv(res.cohort) == csv);

    std::istringstream lin(write_labels_csv(*c.labels));
    CHECK(parse_labels(lin, 4) == *c.labels);
}

TEST_CASE("fingerprint is stable and schema-sensitive") {
    FeatureSchema a = parse_schema(kSchemaJson);
    FeatureSchema b = parse_schema(kSchemaJson);
    CHECK(schema_fingerprint(a) == schema_fingerprint(b));
    CHECK(schema_fingerprint(a).size() == 16);

    FeatureSchema c = a;
    c.features[0].name = "age_years";
    CHECK(schema_fingerprint(c) != schema_fingerprint(a));
}

TEST_CASE("validation report counts observations per feature") {
    Cohort c;
    c.n_patients = 4;
    c.schema = fixtures::make_schema(2, 0, 0);
    fixtures::put_num(c, 0, 0, 1.0);
    fixtures::put_num(c, 1, 0, 2.0);
    c.triplets.push_back({2, 0, RawValue::missing()});
    c.labels = std::vector<int>{1, 0, 0, 0};

    ValidationReport rep = validate_cohort(c);
    REQUIRE(rep.features.size() == 2);
    CHECK(rep.features[0].observed_count == 2);
    CHECK(rep.features[0].missing_rate == doctest::Approx(0.5));
    CHECK_FALSE(rep.features[0].unobserved);
    CHECK(rep.features[1].observed_count == 0);
    CHECK(rep.features[1].unobserved);
    CHECK(rep.label_prevalence.has_value());
    CHECK(*rep.label_prevalence == doctest::Approx(0.25));
}

TEST_CASE("subset_cohort re-indexes patients and labels") {
    Cohort c = fixtures::dense_cohort(5);
    c.labels = std::vector<int>{1, 0, 1, 0, 1};
    Cohort sub = subset_cohort(c, {1, 3, 4});
    CHECK(sub.n_patients == 3);
    CHECK(*sub.labels == std::vector<int>{0, 0, 1});
    // every triplet of patient 3 is now patient 1
    int found = 0;
    for (const Triplet& t : sub.triplets)
        if (t.patient_id == 1) {
            ++found;
            if (t.feature_id == 0) CHECK(t.value.number == 0.5 * 3 - 1.0);
        }
    CHECK(found == c.schema.n_features());

    CHECK_THROWS_AS(subset_cohort(c, {0, 0}), DataError);
    CHECK_THROWS_AS(subset_cohort(c, {9}), DataError);
}
