//! The subprogram archive and its JSON file form.
//!
//! A file holds one JSON array of `{atoms, source_problem, quality}`
//! objects. Several arrays may follow each other in one file (for example
//! after `cat a.json b.json`), and loading several files concatenates their
//! entries in order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::push::PushProgram;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubprogramEntry {
    pub atoms: PushProgram,
    pub source_problem: String,
    /// How many times splicing this entry produced a better child.
    pub quality: u64,
}

impl SubprogramEntry {
    pub fn new(atoms: PushProgram, source_problem: impl Into<String>) -> Self {
        SubprogramEntry {
            atoms,
            source_problem: source_problem.into(),
            quality: 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubprogramArchive {
    entries: Vec<SubprogramEntry>,
}

impl SubprogramArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[SubprogramEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn qualities(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.quality).collect()
    }

    pub fn push(&mut self, entry: SubprogramEntry) {
        self.entries.push(entry);
    }

    /// Records that entry `index` improved a parent.
    pub fn credit(&mut self, index: usize) {
        self.entries[index].quality += 1;
    }

    pub fn add_quality(&mut self, index: usize, amount: u64) {
        self.entries[index].quality += amount;
    }

    pub fn reset_quality(&mut self) {
        for e in &mut self.entries {
            e.quality = 0;
        }
    }

    pub fn with_reset_quality(&self) -> Self {
        let mut copy = self.clone();
        copy.reset_quality();
        copy
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("archive serialization cannot fail")
    }

    /// Parses one or more concatenated JSON arrays.
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        let mut entries = Vec::new();
        for chunk in serde_json::Deserializer::from_str(text).into_iter::<Vec<SubprogramEntry>>() {
            entries.extend(chunk?);
        }
        Ok(SubprogramArchive { entries })
    }

    pub fn load(path: &Path, reset_quality: bool) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut archive = Self::from_json(&text).map_err(|e| Error::json(path, e))?;
        if reset_quality {
            archive.reset_quality();
        }
        Ok(archive)
    }

    /// Union of several archive files, entries kept in file order.
    pub fn load_many<P: AsRef<Path>>(paths: &[P], reset_quality: bool) -> Result<Self> {
        let mut archive = Self::new();
        for path in paths {
            archive.extend(Self::load(path.as_ref(), reset_quality)?.entries);
        }
        Ok(archive)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

impl Extend<SubprogramEntry> for SubprogramArchive {
    fn extend<I: IntoIterator<Item = SubprogramEntry>>(&mut self, iter: I) {
        self.entries.extend(iter);
    }
}

impl FromIterator<SubprogramEntry> for SubprogramArchive {
    fn from_iter<I: IntoIterator<Item = SubprogramEntry>>(iter: I) -> Self {
        SubprogramArchive {
            entries: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn archive(source: &str, texts: &[&str]) -> SubprogramArchive {
        texts
            .iter()
            .map(|t| SubprogramEntry::new(t.parse().unwrap(), source))
            .collect()
    }

    #[test]
    fn json_shape() {
        let mut a = archive("MD", &["in:0 int_min"]);
        a.credit(0);
        let value: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(
            value,
            serde_json::json!([{"atoms": "in:0 int_min", "source_problem": "MD", "quality": 1}])
        );
    }

    #[test]
    fn concatenated_files_form_the_union() {
        let dir = tempfile::tempdir().unwrap();
        let a = archive("MD", &["in:0", "int_max print_int"]);
        let b = archive("CSL", &[r#"s:"x y" str_length"#]);
        let (pa, pb) = (dir.path().join("a.json"), dir.path().join("b.json"));
        a.save(&pa).unwrap();
        b.save(&pb).unwrap();

        let both = SubprogramArchive::load_many(&[&pa, &pb], true).unwrap();
        assert_eq!(both.len(), 3);
        assert_eq!(both.entries()[2].source_problem, "CSL");

        let joined = format!("{}{}", a.to_json(), b.to_json());
        assert_eq!(SubprogramArchive::from_json(&joined).unwrap(), both);
    }

    #[test]
    fn loading_resets_quality_on_request() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = archive("SL", &["i:1", "i:2"]);
        a.credit(1);
        a.credit(1);
        let path = dir.path().join("a.json");
        a.save(&path).unwrap();
        assert_eq!(
            SubprogramArchive::load(&path, false).unwrap().qualities(),
            vec![0, 2]
        );
        assert_eq!(
            SubprogramArchive::load(&path, true).unwrap().qualities(),
            vec![0, 0]
        );
    }

    #[test]
    fn unreadable_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.json");
        assert!(matches!(
            SubprogramArchive::load(&missing, true),
            Err(Error::Io { .. })
        ));
        let bad = dir.path().join("bad.json");
        fs::write(
            &bad,
            r#"[{"atoms": "not_an_instruction", "source_problem": "MD", "quality": 0}]"#,
        )
        .unwrap();
        assert!(matches!(
            SubprogramArchive::load(&bad, true),
            Err(Error::Json { .. })
        ));
    }
}
