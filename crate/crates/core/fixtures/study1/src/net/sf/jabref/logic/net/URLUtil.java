package net.sf.jabref.logic.net;

public class URLUtil {






















































































    public void cleanGoogleSearchURL(String arg0) {




        int count95 = entry.size();
























        helper120.process(entry, 120);









        helper130.process(entry, 130);
}
