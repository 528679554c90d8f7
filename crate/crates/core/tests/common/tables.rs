//! Published dataset tables: rounded sizes, listed scale and class label.

use graphalytics::graph::SizeClass;
use graphalytics::harness::{Catalog, DatasetEntry, DatasetKind};
use graphalytics::kernels::ParameterSet;

pub struct Row {
    pub id: &'static str,
    pub kind: DatasetKind,
    pub n: u64,
    pub m: u64,
    /// Listed scale in tenths.
    pub scale: i32,
    pub class: SizeClass,
}

const K: u64 = 1_000;
const M: u64 = 1_000_000;
const B: u64 = 1_000_000_000;

macro_rules! rows {
    ($kind:ident; $( $id:literal $class:ident $n:expr, $m:expr => $scale:literal ),* $(,)?) => {
        vec![$( Row {
            id: $id,
            kind: DatasetKind::$kind,
            n: $n,
            m: $m,
            scale: $scale,
            class: SizeClass::$class,
        } ),*]
    };
}

pub fn real_world() -> Vec<Row> {
    rows![RealWorld;
        "R1" XXS 2_390 * K, 5_020 * K => 69,
        "R2" XS 830 * K, 17_900 * K => 73,
        "R3" XS 3_770 * K, 16_500 * K => 73,
        "R4" S 60 * K, 50_900 * K => 77,
        "R5" XL 65_600 * K, 1_810 * M => 93,
        "R6" XL 52_600 * K, 1_970 * M => 93,
    ]
}

pub fn graph500() -> Vec<Row> {
    rows![Graph500;
        "G22" S 2_400 * K, 64_200 * K => 78,
        "G23" M 4_600 * K, 129_300 * K => 81,
        "G24" M 8_900 * K, 260_400 * K => 84,
        "G25" L 17_000 * K, 523_600 * K => 87,
        "G26" XL 32_800 * K, 1_100 * M => 90,
        "G27" XL 65_600 * K, 2_100 * M => 93,
        "G28" XXL 121 * M, 4_200 * M => 96,
        "G29" XXL 233 * M, 8_500 * M => 99,
        "G30" XXXL 448 * M, 17 * B => 102,
    ]
}

pub fn datagen() -> Vec<Row> {
    rows![Datagen;
        "D7.5" S 600 * K, 34_200 * K => 75,
        "D7.6" S 800 * K, 42_200 * K => 76,
        "D7.7" S 13_200 * K, 32_800 * K => 76,
        "D7.8" S 16_500 * K, 41_000 * K => 77,
        "D7.9" S 1_400 * K, 85_700 * K => 79,
        "D8.0" M 1_700 * K, 107_500 * K => 80,
        "D8.1" M 2_100 * K, 134_300 * K => 81,
        "D8.2" M 43_700 * K, 106_400 * K => 81,
        "D8.3" M 53_500 * K, 130_600 * K => 82,
        "D8.4" M 3_800 * K, 269_500 * K => 84,
        "D8.5" L 4_600 * K, 332 * M => 85,
        "D8.6" L 5_700 * K, 422 * M => 86,
        "D8.7" L 145_100 * K, 340_200 * K => 86,
        "D8.8" L 168_300 * K, 413_400 * K => 87,
        "D8.9" L 10_600 * K, 848_700 * K => 89,
        "D9.0" XL 12_900 * K, 1_000 * M => 90,
        "D9.1" XL 16_100 * K, 1_300 * M => 91,
        "D9.2" XL 434_900 * K, 1_000 * M => 91,
        "D9.3" XL 555_300 * K, 13_100 * M => 92,
        "D9.4" XL 29_300 * K, 2_600 * M => 94,
        "D-3k" XL 33_500 * K, 2_900 * M => 94,
        "D-10k" XXL 100_200 * K, 9_400 * M => 99,
    ]
}

pub fn all_rows() -> Vec<Row> {
    let mut v = real_world();
    v.extend(graph500());
    v.extend(datagen());
    v
}

/// Name used for the composition tables, which abbreviate some real-world graphs.
pub fn display_name(id: &str) -> &str {
    match id {
        "R4" => "DOTA",
        "R5" => "FSTER",
        "R6" => "TWIT",
        other => other,
    }
}

/// Catalog of every tabled dataset. Weights follow each table's SSSP column:
/// Datagen graphs and dota-league carry weights, the rest do not.
pub fn catalog() -> Catalog {
    let datasets = all_rows()
        .into_iter()
        .map(|r| {
            let name = display_name(r.id).to_string();
            DatasetEntry {
                kind: r.kind,
                directed: false,
                weighted: matches!(r.kind, DatasetKind::Datagen) || r.id == "R4",
                vertex_file: format!("{name}.v").into(),
                edge_file: format!("{name}.e").into(),
                reference_dir: format!("{name}-ref").into(),
                vertices: r.n,
                edges: r.m,
                target_class: Some(r.class),
                parameters: ParameterSet::with_source(1),
                name,
            }
        })
        .collect();
    Catalog::new(datasets).expect("unique names")
}

/// Published composition for a class: dataset name and whether it runs the
/// five unweighted algorithms and SSSP.
pub fn composition(class: SizeClass) -> Vec<(&'static str, bool, bool)> {
    match class {
        SizeClass::S => vec![
            ("DOTA", true, true),
            ("D7.6", false, true),
            ("D7.7", true, true),
            ("D7.8", true, true),
            ("D7.9", true, true),
            ("G22", true, false),
        ],
        SizeClass::M => vec![
            ("D8.0", false, true),
            ("D8.1", true, true),
            ("D8.2", true, true),
            ("D8.3", true, true),
            ("D8.4", true, true),
            ("G24", true, false),
        ],
        SizeClass::L => vec![
            ("D8.5", false, true),
            ("D8.6", true, true),
            ("D8.7", true, true),
            ("D8.8", true, true),
            ("D8.9", true, true),
            ("G25", true, false),
        ],
        SizeClass::XL => vec![
            ("FSTER", true, false),
            ("TWIT", true, false),
            ("D9.0", false, true),
            ("D9.1", false, true),
            ("D9.2", true, true),
            ("D9.3", false, true),
            ("D9.4", true, true),
            ("G26", true, false),
        ],
        _ => Vec::new(),
    }
}
