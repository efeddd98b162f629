use super::{parse_pd, Diagram, LinkError};
use std::collections::BTreeMap;

const BUNDLED: &str = include_str!("../../data/links.tsv");

/// Friendly names for table entries.
pub const ALIASES: &[(&str, &str)] = &[
    ("unknot", "0_1"),
    ("trefoil", "3_1"),
    ("trefoil_L", "3_1"),
    ("figure8", "4_1"),
    ("unlink2", "0^2_1"),
    ("hopf", "2^2_1"),
    ("whitehead", "5^2_1"),
    ("borromean", "6^3_2"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub name: String,
    pub diagram: Diagram,
    pub components: usize,
}

impl TableEntry {
    /// The link this entry draws: names `K~tag` are alternative diagrams
    /// of `K`.
    pub fn base_name(&self) -> &str {
        self.name.split('~').next().unwrap()
    }
}

#[derive(Debug, Clone, Default)]
pub struct LinkTable {
    pub entries: Vec<TableEntry>,
}

impl LinkTable {
    /// Look up by table name or alias.
    pub fn get(&self, name: &str) -> Option<&TableEntry> {
        let name = ALIASES.iter().find(|a| a.0 == name).map_or(name, |a| a.1);
        self.entries.iter().find(|e| e.name == name)
    }

    /// Entries with no `~` in their names.
    pub fn primary(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.iter().filter(|e| !e.name.contains('~'))
    }

    /// Each link drawn by more than one diagram, with all its diagrams.
    pub fn reidemeister_groups(&self) -> BTreeMap<&str, Vec<&TableEntry>> {
        let mut groups: BTreeMap<&str, Vec<&TableEntry>> = BTreeMap::new();
        for e in &self.entries {
            groups.entry(e.base_name()).or_default().push(e);
        }
        groups.retain(|_, v| v.len() > 1);
        groups
    }
}

/// Lines `name<TAB>PD<TAB>components`; `#` starts a comment.
pub fn parse_table(text: &str) -> Result<LinkTable, (usize, LinkError)> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let lineno = k + 1;
        let bad = |what: &str| (lineno, LinkError::MalformedSyntax { offset: 0, token: what.to_string() });
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [name, pd, comps] = fields[..] else {
            return Err(bad(line));
        };
        let components: usize = comps.parse().map_err(|_| bad(comps))?;
        let diagram = parse_pd(pd).map_err(|e| (lineno, e))?;
        if diagram.component_count() != components {
            return Err(bad(&format!("{name}: {} components drawn, {components} listed", diagram.component_count())));
        }
        entries.push(TableEntry { name: name.to_string(), diagram, components });
    }
    Ok(LinkTable { entries })
}

/// The table shipped with the crate.
pub fn bundled_table() -> LinkTable {
    parse_table(BUNDLED).expect("bundled link table is valid")
}
