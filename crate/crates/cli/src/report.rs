//! Input and output shapes: the classification result in JSON, CSV, and
//! text, the decomposition output, and the group-description input.

use std::collections::BTreeMap;

use gorenstein_core::builder::subset_bitmasks;
use gorenstein_core::{ChainCensus, ClassData, ClassRecord, ModOneVector, Rational};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Serialize)]
struct ClassOut {
    chain: Vec<u64>,
    subsets: Vec<Vec<usize>>,
    #[serde(rename = "N")]
    n: usize,
    generators: Vec<Vec<String>>,
    hstar: Vec<u64>,
}

#[derive(Serialize)]
struct ResultOut {
    v: u64,
    k: u64,
    total: usize,
    census: BTreeMap<usize, u64>,
    classes: Vec<ClassOut>,
}

#[derive(Serialize)]
struct DataOut {
    k: u64,
    chain: Vec<u64>,
    subsets: Vec<Vec<usize>>,
}

/// Group description accepted by `decompose`: coordinate count, generator
/// rows as fraction strings, and the order the closure must reach.
#[derive(Deserialize)]
struct GroupIn {
    #[serde(rename = "N")]
    n: usize,
    generators: Vec<Vec<String>>,
    order: u64,
}

fn class_out(rec: &ClassRecord) -> ClassOut {
    ClassOut {
        chain: rec.data().chain().to_vec(),
        subsets: subset_lists(rec.data()),
        n: rec.group().width(),
        generators: rec.generators().iter().map(row_strings).collect(),
        hstar: rec.hstar().to_vec(),
    }
}

fn subset_lists(data: &ClassData) -> Vec<Vec<usize>> {
    data.subsets()
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect()
}

fn row_strings(g: &ModOneVector) -> Vec<String> {
    (0..g.width()).map(|i| g.entry(i).to_string()).collect()
}

pub fn render_json(
    v: u64,
    k: u64,
    census: &ChainCensus,
    records: &[ClassRecord],
) -> Result<String, Failure> {
    let out = ResultOut {
        v,
        k,
        total: records.len(),
        census: census.counts().clone(),
        classes: records.iter().map(class_out).collect(),
    };
    to_pretty_json(&out)
}

pub fn render_data(data: &ClassData) -> Result<String, Failure> {
    let out = DataOut {
        k: data.k(),
        chain: data.chain().to_vec(),
        subsets: subset_lists(data),
    };
    to_pretty_json(&out)
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Usage(format!("cannot serialize result: {e}")))
}

pub fn render_csv(records: &[ClassRecord]) -> String {
    let mut out = String::from("chain,subsets,N,dimension,hstar\n");
    for rec in records {
        let chain = join_u64(rec.data().chain(), "/");
        let masks: Vec<String> = subset_bitmasks(rec.data())
            .iter()
            .map(u64::to_string)
            .collect();
        out.push_str(&format!(
            "{chain},{},{},{},\"{}\"\n",
            masks.join(";"),
            rec.group().width(),
            rec.dimension(),
            run_length(rec.hstar())
        ));
    }
    out
}

pub fn render_text(v: u64, k: u64, records: &[ClassRecord]) -> String {
    let mut out = format!("v = {v}, k = {k}: {}\n", count_noun(records.len()));
    let mut i = 0;
    let mut index = 0;
    while i < records.len() {
        let chain = records[i].data().chain();
        let mut j = i;
        while j < records.len() && records[j].data().chain() == chain {
            j += 1;
        }
        out.push_str(&format!(
            "chain {} ({}):\n",
            join_u64(chain, "<"),
            count_noun(j - i)
        ));
        for rec in &records[i..j] {
            index += 1;
            out.push_str(&format!(
                "  [{index}] subsets {}\n",
                subsets_text(rec.data())
            ));
            out.push_str(&format!(
                "      generators: {}\n",
                generators_text(rec.generators())
            ));
        }
        i = j;
    }
    out.push_str(&format!("total: {}\n", records.len()));
    out
}

/// Parses a group description, returning the width, the generator rows,
/// and the declared order.
pub fn parse_group(text: &str) -> Result<(usize, Vec<ModOneVector>, u64), Failure> {
    let parsed: GroupIn = serde_json::from_str(text)
        .map_err(|e| Failure::Usage(format!("malformed group JSON: {e}")))?;
    if parsed.n == 0 {
        return Err(Failure::Usage("width N must be at least 1".to_string()));
    }
    let mut generators = Vec::with_capacity(parsed.generators.len());
    for (r, row) in parsed.generators.iter().enumerate() {
        if row.len() != parsed.n {
            return Err(Failure::Usage(format!(
                "generator {r} has {} entries, expected N = {}",
                row.len(),
                parsed.n
            )));
        }
        let mut entries = Vec::with_capacity(row.len());
        for cell in row {
            let value: Rational = cell
                .trim()
                .parse()
                .map_err(|e| Failure::Usage(format!("cannot parse fraction '{cell}': {e}")))?;
            entries.push(value);
        }
        let vector = ModOneVector::new(entries).map_err(|e| Failure::Usage(e.to_string()))?;
        generators.push(vector);
    }
    Ok((parsed.n, generators, parsed.order))
}

fn join_u64(values: &[u64], sep: &str) -> String {
    let parts: Vec<String> = values.iter().map(u64::to_string).collect();
    parts.join(sep)
}

/// Run-length encoding of an h* vector, e.g. `[1, 1, 1, 1, 0]` becomes
/// `4*1,1*0`.
fn run_length(values: &[u64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j < values.len() && values[j] == values[i] {
            j += 1;
        }
        parts.push(format!("{}*{}", j - i, values[i]));
        i = j;
    }
    parts.join(",")
}

fn count_noun(n: usize) -> String {
    if n == 1 {
        "1 class".to_string()
    } else {
        format!("{n} classes")
    }
}

fn subsets_text(data: &ClassData) -> String {
    let parts: Vec<String> = data
        .subsets()
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(usize::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    parts.join(";")
}

fn generators_text(gens: &[ModOneVector]) -> String {
    let rows: Vec<String> = gens.iter().map(|g| row_strings(g).join(",")).collect();
    rows.join(" | ")
}
