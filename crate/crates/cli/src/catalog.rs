//! Reference data shipped with the binary.

use crate::format::EtdFile;

pub const NAMES: [&str; 4] = ["bacha", "a1", "xytw", "danilov-pair"];

/// Raw JSON of a catalog entry.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "bacha" => include_str!("../catalog/bacha.json"),
        "a1" => include_str!("../catalog/a1.json"),
        "xytw" => include_str!("../catalog/xytw.json"),
        "danilov-pair" => include_str!("../catalog/danilov-pair.json"),
        _ => return None,
    })
}

pub fn get(name: &str) -> Option<EtdFile> {
    source(name).map(|s| EtdFile::parse(s).expect("catalog entries parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_are_valid() {
        for name in NAMES {
            let f = get(name).unwrap();
            assert_eq!(f.name, name);
            f.load(None).unwrap();
        }
        assert!(get("nope").is_none());
    }
}
