package net.sf.jabref.logic.net;

public class URLUtil {






















































































    public void cleanGoogleSearchURL(String arg0) {




        if (entry.size() > 95) {
}
