/**
 * DOM layer: renders the current SessionStore snapshot into a root element.
 * Rendering is a full rebuild per change, which is plenty at this scale.
 * All values shown here come straight from server payloads via the store.
 */

import type { ChatMessage, FeedCard, MatchEntry, RegistrationForm } from "./api.js";
import type { SessionStore } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== "") {
    node.className = className;
  }
  if (text !== "") {
    node.textContent = text;
  }
  return node;
}

function field(labelText: string, input: HTMLInputElement): HTMLLabelElement {
  const label = el("label", "field");
  label.append(el("span", "field-label", labelText), input);
  return label;
}

function textInput(name: string, type = "text", placeholder = ""): HTMLInputElement {
  const input = el("input");
  input.name = name;
  input.type = type;
  input.placeholder = placeholder;
  return input;
}

export function render(store: SessionStore, root: HTMLElement): void {
  root.replaceChildren();
  if (store.me !== null) {
    root.append(renderNav(store));
  }
  root.append(renderNotices(store));
  switch (store.view) {
    case "login":
      root.append(renderLogin(store));
      break;
    case "register":
      root.append(renderRegister(store));
      break;
    case "feed":
      root.append(renderFeed(store));
      break;
    case "matches":
      root.append(renderMatches(store));
      break;
    case "chat":
      root.append(renderChat(store));
      break;
    case "profile":
      root.append(renderProfile(store));
      break;
  }
}

function renderNav(store: SessionStore): HTMLElement {
  const nav = el("nav", "topbar");
  nav.append(el("span", "brand", "collabrec"));
  const links = el("div", "nav-links");
  const feed = el("button", "", "Feed");
  feed.onclick = () => store.showFeed();
  const matches = el("button", "", "Matches");
  matches.onclick = () => store.showMatches();
  const profile = el("button", "", "Profile");
  profile.onclick = () => void store.showProfile();
  const logout = el("button", "ghost", "Log out");
  logout.onclick = () => store.logout();
  links.append(feed, matches, profile, logout);
  nav.append(links);
  return nav;
}

function renderNotices(store: SessionStore): HTMLElement {
  const box = el("div", "notices");
  store.notices.forEach((notice, index) => {
    const row = el("div", `notice notice-${notice.kind}`);
    row.append(el("span", "", notice.text));
    const close = el("button", "ghost", "dismiss");
    close.onclick = () => store.dismissNotice(index);
    row.append(close);
    box.append(row);
  });
  return box;
}

function renderLogin(store: SessionStore): HTMLElement {
  const panel = el("section", "panel narrow");
  panel.append(el("h1", "", "Sign in"));
  const form = el("form");
  const email = textInput("email", "email", "you@example.edu");
  const password = textInput("password", "password");
  form.append(field("Email", email), field("Password", password));
  const submit = el("button", "primary", "Sign in");
  submit.type = "submit";
  form.append(submit);
  form.onsubmit = (event) => {
    event.preventDefault();
    void store.login(email.value, password.value);
  };
  panel.append(form);
  const alt = el("p", "alt-action", "New here? ");
  const link = el("button", "linkish", "Create an account");
  link.onclick = () => store.showRegister();
  alt.append(link);
  panel.append(alt);
  return panel;
}

function renderRegister(store: SessionStore): HTMLElement {
  const panel = el("section", "panel narrow");
  panel.append(el("h1", "", "Create your profile"));
  const form = el("form");
  const inputs = {
    name: textInput("name"),
    email: textInput("email", "email"),
    password: textInput("password", "password"),
    profession: textInput("profession"),
    experience: textInput("experience", "number"),
    domain: textInput("domain"),
    skillset: textInput("skillset"),
    interest: textInput("interest"),
    collaboration_with: textInput("collaboration_with"),
  };
  form.append(
    field("Name", inputs.name),
    field("Email", inputs.email),
    field("Password", inputs.password),
    field("Profession", inputs.profession),
    field("Years of experience", inputs.experience),
    field("Domain", inputs.domain),
    field("Skillset", inputs.skillset),
    field("Collaboration interest", inputs.interest),
    field("Wants to collaborate with", inputs.collaboration_with),
  );
  const submit = el("button", "primary", "Register");
  submit.type = "submit";
  form.append(submit);
  form.onsubmit = (event) => {
    event.preventDefault();
    const registration: RegistrationForm = {
      name: inputs.name.value,
      email: inputs.email.value,
      password: inputs.password.value,
      profession: inputs.profession.value,
      experience: Number(inputs.experience.value),
      domain: inputs.domain.value,
      skillset: inputs.skillset.value,
      interest: inputs.interest.value,
      collaboration_with: inputs.collaboration_with.value,
    };
    void store.register(registration);
  };
  panel.append(form);
  const alt = el("p", "alt-action", "Already registered? ");
  const link = el("button", "linkish", "Sign in");
  link.onclick = () => store.showLogin();
  alt.append(link);
  panel.append(alt);
  return panel;
}

function renderFeed(store: SessionStore): HTMLElement {
  const panel = el("section", "panel");
  if (store.matchBanner !== null) {
    const banner = el("div", "match-banner");
    banner.append(el("strong", "", store.matchBanner));
    const ok = el("button", "", "Nice!");
    ok.onclick = () => store.dismissBanner();
    banner.append(ok);
    panel.append(banner);
  }
  const card = store.deck[0];
  if (card === undefined) {
    panel.append(el("p", "empty", "No more recommendations right now."));
    const refresh = el("button", "", "Refresh feed");
    refresh.onclick = () => void store.refreshFeed();
    panel.append(refresh);
    return panel;
  }
  panel.append(renderCard(card));
  const controls = el("div", "swipe-controls");
  const left = el("button", "swipe-left", "Pass");
  left.onclick = () => void store.swipeTop("left");
  const right = el("button", "swipe-right", "Connect");
  right.onclick = () => void store.swipeTop("right");
  controls.append(left, right);
  panel.append(controls);
  panel.append(el("p", "deck-count", `${store.deck.length} in deck`));
  return panel;
}

function renderCard(card: FeedCard): HTMLElement {
  const box = el("article", "card");
  box.append(el("h2", "", card.name));
  box.append(el("p", "summary", card.summary));
  const meta = el("p", "meta");
  const ratingText = card.rating === null ? "unrated" : `rated ${card.rating.toFixed(1)}`;
  meta.textContent = `similarity ${card.similarity.toFixed(4)} | cluster ${card.cluster} | ${ratingText}`;
  box.append(meta);
  return box;
}

function renderMatches(store: SessionStore): HTMLElement {
  const panel = el("section", "panel");
  panel.append(el("h1", "", "Your matches"));
  if (store.matches.length === 0) {
    panel.append(el("p", "empty", "No matches yet. Keep swiping."));
    return panel;
  }
  const list = el("ul", "match-list");
  for (const entry of store.matches) {
    list.append(renderMatchRow(store, entry));
  }
  panel.append(list);
  return panel;
}

function renderMatchRow(store: SessionStore, entry: MatchEntry): HTMLElement {
  const row = el("li", "match-row");
  const who = el("div", "match-who");
  who.append(el("strong", "", entry.other_name));
  who.append(el("small", "", new Date(entry.matched_at).toLocaleString()));
  row.append(who);
  const actions = el("div", "match-actions");
  const open = el("button", "primary", "Open chat");
  open.onclick = () => void store.openChat(entry.match_id);
  actions.append(open);
  const score = el("select");
  for (const value of [1, 2, 3, 4, 5]) {
    const option = el("option", "", `${value} star${value === 1 ? "" : "s"}`);
    option.value = String(value);
    score.append(option);
  }
  score.value = "5";
  const rate = el("button", "", "Rate");
  rate.onclick = () => void store.rateMatch(entry.other_user, Number(score.value));
  actions.append(score, rate);
  row.append(actions);
  return row;
}

function renderChat(store: SessionStore): HTMLElement {
  const panel = el("section", "panel");
  const chat = store.chat;
  if (chat === null) {
    panel.append(el("p", "empty", "No chat selected."));
    return panel;
  }
  const header = el("div", "chat-header");
  const back = el("button", "ghost", "< back");
  back.onclick = () => store.closeChat();
  header.append(back, el("h1", "", chat.otherName));
  panel.append(header);
  if (chat.denied) {
    panel.append(el("p", "notice notice-error", "Not matched; this chat is unavailable."));
    return panel;
  }
  const thread = el("div", "thread");
  if (chat.messages.length === 0 && chat.pending.length === 0) {
    thread.append(el("p", "empty", "No messages yet. Say hello!"));
  }
  for (const message of chat.messages) {
    thread.append(renderMessage(store, message));
  }
  for (const text of chat.pending) {
    thread.append(el("div", "message mine pending", text));
  }
  panel.append(thread);
  const form = el("form", "composer");
  const input = textInput("text", "text", "Write a message");
  input.autocomplete = "off";
  const send = el("button", "primary", "Send");
  send.type = "submit";
  form.append(input, send);
  form.onsubmit = (event) => {
    event.preventDefault();
    const text = input.value;
    input.value = "";
    void store.sendMessage(text);
  };
  panel.append(form);
  return panel;
}

function renderMessage(store: SessionStore, message: ChatMessage): HTMLElement {
  const mine = store.me !== null && message.sender === store.me.id;
  const bubble = el("div", `message ${mine ? "mine" : "theirs"}`);
  bubble.append(el("span", "", message.text));
  bubble.append(el("small", "stamp", new Date(message.ts).toLocaleTimeString()));
  return bubble;
}

function renderProfile(store: SessionStore): HTMLElement {
  const panel = el("section", "panel narrow");
  panel.append(el("h1", "", "Your profile"));
  const me = store.me;
  if (me === null) {
    panel.append(el("p", "empty", "Not signed in."));
    return panel;
  }
  const rows: Array<[string, string]> = [
    ["Name", me.name],
    ["Email", me.email],
    ["Profession", me.profession],
    ["Domain", me.domain],
    ["Skillset", me.skillset],
    ["Collaboration interest", me.interest],
    ["Wants to collaborate with", me.collaboration_with],
    ["Average rating", me.rating === null ? "not yet rated" : me.rating.toFixed(1)],
  ];
  const list = el("dl", "profile");
  for (const [label, value] of rows) {
    list.append(el("dt", "", label), el("dd", "", value));
  }
  panel.append(list);
  return panel;
}
