//! Token interning with a reserved unknown-word id.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const UNK_ID: u32 = 0;
pub const UNK_TOKEN: &str = "<unk>";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocab {
    id_to_token: Vec<String>,
    #[serde(skip)]
    token_to_id: HashMap<String, u32>,
}

impl Default for Vocab {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocab {
    pub fn new() -> Self {
        let mut v = Vocab {
            id_to_token: Vec::new(),
            token_to_id: HashMap::new(),
        };
        v.intern(UNK_TOKEN);
        v
    }

    /// Id for a token, adding it if unseen. Ids are dense from 0.
    pub fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.token_to_id.get(token) {
            return id;
        }
        let id = self.id_to_token.len() as u32;
        self.id_to_token.push(token.to_string());
        self.token_to_id.insert(token.to_string(), id);
        id
    }

    /// Id for a token; [`UNK_ID`] when unseen.
    pub fn lookup(&self, token: &str) -> u32 {
        self.token_to_id.get(token).copied().unwrap_or(UNK_ID)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.token_to_id.contains_key(token)
    }

    pub fn token(&self, id: u32) -> &str {
        &self.id_to_token[id as usize]
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_token.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    /// One token per line, line index = id.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.id_to_token {
            s.push_str(t);
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Vocab> {
        let mut id_to_token = Vec::new();
        let mut token_to_id = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if token_to_id.insert(line.to_string(), i as u32).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate vocab token `{line}` at line {}",
                    i + 1
                )));
            }
            id_to_token.push(line.to_string());
        }
        if id_to_token.first().map(String::as_str) != Some(UNK_TOKEN) {
            return Err(Error::InvalidInput(format!(
                "vocab line 1 must be the reserved `{UNK_TOKEN}` token"
            )));
        }
        Ok(Vocab {
            id_to_token,
            token_to_id,
        })
    }

    /// Rebuild the lookup map after deserialization.
    pub fn rebuild_index(&mut self) {
        self.token_to_id = self
            .id_to_token
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
    }
}
