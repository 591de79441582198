//! The single JSON document shared by every subcommand.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use skewcat_core::group::{FinGroup, GroupDoc, Transversal};
use skewcat_core::lincat::json::{action_from_doc, category_from_doc, degrees_from_doc, ActionDoc, CategoryDoc};
use skewcat_core::lincat::{validate_action, validate_category, validate_grading, GActionOnCat, GradedLinCat, LinCat};
use skewcat_core::linalg::Field;

use crate::CliError;

/// `{"field": "p:101", "group": {...}, "category": {...}, "action": {...}, "transversal": [...]}`.
/// `field`, `action` and `transversal` are optional; a missing action is the trivial one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub group: GroupDoc,
    pub category: CategoryDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal: Option<Vec<String>>,
}

impl InputDoc {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    /// Errors carry the JSON path and line of the offending value.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }
}

/// A parsed document. Axioms are checked separately by [`Loaded::validate`].
pub struct Loaded {
    pub field: Field,
    pub group: Arc<FinGroup>,
    pub cat: LinCat,
    pub action: GActionOnCat,
    pub degrees: Option<Vec<usize>>,
    pub transversal: Option<Vec<String>>,
}

impl Loaded {
    /// `field` overrides the document's field; the default is 𝔽_101.
    pub fn new(doc: &InputDoc, field: Option<Field>) -> Result<Self, CliError> {
        let field = match (field, &doc.field) {
            (Some(f), _) => f,
            (None, Some(text)) => text.parse()?,
            (None, None) => Field::Prime(101),
        };
        let group = Arc::new(FinGroup::from_doc(&doc.group)?);
        let cat = category_from_doc(&doc.category, field)?;
        let action = match &doc.action {
            Some(a) => action_from_doc(a, &cat, group.clone())?,
            None => GActionOnCat::trivial(&cat, group.clone()),
        };
        let degrees = degrees_from_doc(&doc.category, &group)?;
        Ok(Loaded {
            field,
            group,
            cat,
            action,
            degrees,
            transversal: doc.transversal.clone(),
        })
    }

    /// Category, action and (when present) grading axioms, in that order.
    pub fn validate(&self) -> skewcat_core::Result<()> {
        self.group.validate()?;
        validate_category(&self.cat)?;
        validate_action(&self.cat, &self.action)?;
        if let Some(b) = self.graded() {
            validate_grading(&b?)?;
        }
        Ok(())
    }

    pub fn graded(&self) -> Option<skewcat_core::Result<GradedLinCat>> {
        self.degrees
            .as_ref()
            .map(|d| GradedLinCat::new(self.cat.clone(), self.group.clone(), d.clone()))
    }

    /// The transversal named on the command line or in the document. Entries are object
    /// names, or indices when no object has that name.
    pub fn transversal(&self, cli: Option<&[String]>) -> skewcat_core::Result<Option<Transversal>> {
        let Some(names) = cli.or(self.transversal.as_deref()) else {
            return Ok(None);
        };
        let reps = names
            .iter()
            .map(|n| {
                self.cat
                    .object_index(n)
                    .or_else(|| n.parse().ok().filter(|&i: &usize| i < self.cat.num_objects()))
                    .ok_or_else(|| skewcat_core::Error::InvalidTransversal(format!("unknown object {n:?}")))
            })
            .collect::<skewcat_core::Result<Vec<_>>>()?;
        Transversal::from_reps(self.action.on_objects(), &reps).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP: &str = r#"{
      "group": {"elements": ["1", "s"], "table": [[0, 1], [1, 0]]},
      "category": {
        "objects": ["a", "b"],
        "morphisms": [{"name": "1a", "src": "a", "tgt": "a"}, {"name": "1b", "src": "b", "tgt": "b"}],
        "identities": {"a": {"1a": 1}, "b": {"1b": 1}},
        "composition": [
          {"g": "1a", "f": "1a", "result": {"1a": 1}},
          {"g": "1b", "f": "1b", "result": {"1b": 1}}
        ]
      },
      "action": {
        "on_objects": {"s": {"a": "b", "b": "a"}},
        "on_morphisms": {"s": {"1a": {"1b": 1}, "1b": {"1a": 1}}}
      }
    }"#;

    #[test]
    fn defaults_to_f101_and_validates() {
        let doc = InputDoc::from_json(SWAP).unwrap();
        let l = Loaded::new(&doc, None).unwrap();
        assert_eq!(l.field, Field::Prime(101));
        l.validate().unwrap();
        assert!(l.graded().is_none());
    }

    #[test]
    fn unknown_keys_are_located() {
        let text = SWAP.replacen("\"action\"", "\"actoin\"", 1);
        match InputDoc::from_json(&text) {
            Err(CliError::Parse { path, line, .. }) => {
                assert!(line > 1);
                assert_eq!(path, "actoin");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transversal_by_name_or_index() {
        let doc = InputDoc::from_json(SWAP).unwrap();
        let l = Loaded::new(&doc, None).unwrap();
        let by_name = l.transversal(Some(&["b".to_string()])).unwrap().unwrap();
        let by_index = l.transversal(Some(&["1".to_string()])).unwrap().unwrap();
        assert_eq!(by_name.rep(0), 1);
        assert_eq!(by_index.rep(0), 1);
        assert!(l.transversal(Some(&["c".to_string()])).is_err());
        assert!(l.transversal(Some(&["a".to_string(), "b".to_string()])).is_err());
        assert!(l.transversal(None).unwrap().is_none());
    }
}
