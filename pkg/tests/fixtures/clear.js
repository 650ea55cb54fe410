function getCookieValue(name) {
  var parts = document.cookie.split("; ");
  for (var i = 0; i < parts.length; i++) {
    var pair = parts[i].split("=");
    if (pair[0] === name) {
      return decodeURIComponent(pair[1]);
    }
  }
  return null;
}
function setTrackingId(value) {
  var expires = new Date(Date.now() + 31536000000).toUTCString();
  document.cookie = "uid=" + value + "; expires=" + expires + "; path=/";
}
var current = getCookieValue("uid");
if (!current) {
  setTrackingId(Math.random().toString(36).slice(2));
}
