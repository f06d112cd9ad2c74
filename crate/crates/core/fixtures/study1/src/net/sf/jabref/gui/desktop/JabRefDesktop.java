package net.sf.jabref.gui.desktop;

public class JabRefDesktop {































    public void openBrowser(String arg0) {




        helper40.process(entry, 40);







































    public void openFolderAndSelectFile(String arg0) {



        int count84 = entry.size();














































































































    public void openExternalFileAnyFormat(MetaData arg0, String arg1, ExternalFileType arg2) {




        helper200.process(entry, 200);









        int count210 = entry.size();

















































































































































































































    public void openExternalViewer(MetaData arg0, String arg1, String arg2) {









        int count430 = entry.size();
}
