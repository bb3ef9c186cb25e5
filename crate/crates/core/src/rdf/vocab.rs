//! Namespaces and terms of the metadata vocabulary.

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const VOID: &str = "http://rdfs.org/ns/void#";
pub const KPI: &str = "http://w3id.org/kpionto/";
pub const DL: &str = "http://kdmg.dii.univpm.it/dl/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";

/// Prefixes written at the top of every Turtle document, in order.
pub const STANDARD_PREFIXES: [(&str, &str); 6] = [
    ("xsd", XSD),
    ("dcterms", DCTERMS),
    ("void", VOID),
    ("kpi", KPI),
    ("dl", DL),
    ("rdfs", RDFS),
];

pub mod rdf {
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
}

pub mod rdfs {
    pub const LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
}

pub mod xsd {
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
    pub const DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";
}

pub mod void {
    pub const DATASET: &str = "http://rdfs.org/ns/void#Dataset";
}

pub mod dcterms {
    pub const TITLE: &str = "http://purl.org/dc/terms/title";
    pub const DESCRIPTION: &str = "http://purl.org/dc/terms/description";
    pub const FORMAT: &str = "http://purl.org/dc/terms/format";
    pub const SUBJECT: &str = "http://purl.org/dc/terms/subject";
    pub const CREATOR: &str = "http://purl.org/dc/terms/creator";
    pub const PUBLISHER: &str = "http://purl.org/dc/terms/publisher";
    pub const CONTRIBUTOR: &str = "http://purl.org/dc/terms/contributor";
    pub const DATE: &str = "http://purl.org/dc/terms/date";
    pub const LICENSE: &str = "http://purl.org/dc/terms/license";
}

pub mod kpi {
    pub const LEVEL: &str = "http://w3id.org/kpionto/Level";
    pub const MEMBER: &str = "http://w3id.org/kpionto/Member";
    pub const INDICATOR: &str = "http://w3id.org/kpionto/Indicator";
    pub const DIMENSION: &str = "http://w3id.org/kpionto/Dimension";
    pub const IN_LEVEL: &str = "http://w3id.org/kpionto/inLevel";
    pub const IN_DIMENSION: &str = "http://w3id.org/kpionto/inDimension";
    pub const ROLLUP: &str = "http://w3id.org/kpionto/rollup";
}

pub mod dl {
    // classes
    pub const SOURCE: &str = "http://kdmg.dii.univpm.it/dl/Source";
    pub const DOMAIN: &str = "http://kdmg.dii.univpm.it/dl/Domain";
    pub const PROFILE: &str = "http://kdmg.dii.univpm.it/dl/Profile";
    pub const D_PROFILE: &str = "http://kdmg.dii.univpm.it/dl/DProfile";
    pub const D_PROFILE_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/DProfileElement";
    pub const I_PROFILE: &str = "http://kdmg.dii.univpm.it/dl/IProfile";
    pub const DISTRIBUTION: &str = "http://kdmg.dii.univpm.it/dl/Distribution";
    pub const DISTRIBUTION_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/DistributionElement";
    pub const CATEGORIES: &str = "http://kdmg.dii.univpm.it/dl/Categories";
    pub const CATEGORY_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/CategoryElement";
    pub const YEARS: &str = "http://kdmg.dii.univpm.it/dl/Years";
    pub const YEAR_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/YearElement";
    pub const WORDS_CLASS: &str = "http://kdmg.dii.univpm.it/dl/Words";
    pub const WORD_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/WordElement";

    // source
    pub const LOCATION: &str = "http://kdmg.dii.univpm.it/dl/location";
    pub const DOMAINS: &str = "http://kdmg.dii.univpm.it/dl/domains";
    pub const ITEMS: &str = "http://kdmg.dii.univpm.it/dl/items";
    pub const CONTAINS: &str = "http://kdmg.dii.univpm.it/dl/contains";

    // attribute
    pub const ATTRIBUTE_TYPE: &str = "http://kdmg.dii.univpm.it/dl/attributeType";
    pub const MAP_TO: &str = "http://kdmg.dii.univpm.it/dl/mapTo";
    pub const HAS_D_PROFILE: &str = "http://kdmg.dii.univpm.it/dl/hasDProfile";
    pub const HAS_I_PROFILE: &str = "http://kdmg.dii.univpm.it/dl/hasIProfile";

    // dimensional profile
    pub const HAS_D_PROFILE_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/hasDProfileElement";
    pub const TO_MEMBER: &str = "http://kdmg.dii.univpm.it/dl/toMember";
    pub const FREQUENCY: &str = "http://kdmg.dii.univpm.it/dl/frequency";
    pub const OTHERS: &str = "http://kdmg.dii.univpm.it/dl/others";

    // attribute profiles
    pub const MAX: &str = "http://kdmg.dii.univpm.it/dl/max";
    pub const MIN: &str = "http://kdmg.dii.univpm.it/dl/min";
    pub const MEAN: &str = "http://kdmg.dii.univpm.it/dl/mean";
    pub const MEDIAN: &str = "http://kdmg.dii.univpm.it/dl/median";
    pub const DISTINCT: &str = "http://kdmg.dii.univpm.it/dl/distinct";
    pub const NULL: &str = "http://kdmg.dii.univpm.it/dl/null";
    pub const HAS_DISTRIBUTION: &str = "http://kdmg.dii.univpm.it/dl/hasDistribution";
    pub const HAS_DISTRIBUTION_ELEMENT: &str =
        "http://kdmg.dii.univpm.it/dl/hasDistributionElement";
    pub const START_RANGE: &str = "http://kdmg.dii.univpm.it/dl/start_range";
    pub const END_RANGE: &str = "http://kdmg.dii.univpm.it/dl/end_range";
    pub const COUNT: &str = "http://kdmg.dii.univpm.it/dl/count";
    pub const HAS_CATEGORIES: &str = "http://kdmg.dii.univpm.it/dl/hasCategories";
    pub const HAS_CATEGORY_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/hasCategoryElement";
    pub const CATEGORY: &str = "http://kdmg.dii.univpm.it/dl/category";
    pub const CATEGORY_COUNT: &str = "http://kdmg.dii.univpm.it/dl/categoryCount";
    pub const MIN_DATE: &str = "http://kdmg.dii.univpm.it/dl/minDate";
    pub const MAX_DATE: &str = "http://kdmg.dii.univpm.it/dl/maxDate";
    pub const HAS_YEARS: &str = "http://kdmg.dii.univpm.it/dl/hasYears";
    pub const HAS_YEAR_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/hasYearElement";
    pub const YEAR: &str = "http://kdmg.dii.univpm.it/dl/year";
    pub const YEAR_COUNT: &str = "http://kdmg.dii.univpm.it/dl/yearCount";
    pub const WORDS: &str = "http://kdmg.dii.univpm.it/dl/words";
    pub const HAS_WORDS: &str = "http://kdmg.dii.univpm.it/dl/hasWords";
    pub const HAS_WORD_ELEMENT: &str = "http://kdmg.dii.univpm.it/dl/hasWordElement";
    pub const WORD: &str = "http://kdmg.dii.univpm.it/dl/word";
    pub const WORD_COUNT: &str = "http://kdmg.dii.univpm.it/dl/wordCount";
}
